"""Smoke test for the netrep extension module.

Build it first with `pip install --no-build-isolation -e crates/python`.
"""

import sys

import netrep


def main():
    code, out, _ = netrep.run(["check", "--property", "submodular", "--function", "builtin:and2"])
    assert code == 1, code
    assert '"holds": false' in out

    doc = netrep.decide("builtin:bisub3", "builtin:pair")
    assert doc["exit_code"] == 1
    assert doc["verdict"] == "infeasible"
    assert doc["stats"]["variables"] == 64
    report = netrep.verify_certificate(doc)
    assert report["valid"] is True, report

    doc["certificate"]["farkas"] = doc["certificate"]["farkas"][1:]
    assert netrep.verify_certificate(doc)["valid"] is False

    feasible = netrep.decide("builtin:and2", "builtin:star1")
    assert feasible["verdict"] == "feasible"
    assert netrep.verify_certificate(feasible)["valid"] is True

    ref = netrep.wpol_refute("omega2")
    assert ref["total"] == "1" and ref["refutes"] is True
    table = [c for c in netrep.wpol_refute("omega_k(3)")["contributions"] if c["name"].startswith("phi")]
    assert [c["weighted"] for c in table][9:12] == ["1", "1", "1"]

    cone = netrep.rays(2)
    assert cone["ray_count"] == 118 and cone["orbit_count"] == 31

    try:
        netrep.decide("builtin:nope", "builtin:pair")
    except ValueError as e:
        assert "nope" in str(e)
    else:
        raise AssertionError("expected ValueError")

    print("python smoke test: ok")


if __name__ == "__main__":
    sys.exit(main())
