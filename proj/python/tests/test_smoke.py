"""Smoke tests for the canlink python module.

Run with the built extension on the path:
    PYTHONPATH=build/python python3 python/tests/test_smoke.py
(ctest wires this up automatically as `python_smoke`.)
"""

import sys

import canlink


def test_split():
    out = canlink.split("x^2 + x*y^2", ["x", "y"], "x", 4)
    assert out["h"] == "-1/4*y^4", out
    assert out["g"] == "1/2*y^2", out
    assert out["verified"] is True


def test_iterated_split_quartic():
    quartic = (
        "1/16*(16*(x^2 + y^2) + 32*x*z^2 - 16*y^3 + 16*z^4 - 32*y*z^3"
        " + 8*(2*x^2 - 2*x*y + 5*y^2)*z^2 + 8*(2*x^3 - 5*x^2*y - 6*x*y^2 - 7*y^3)*z"
        " + 20*x^4 + 44*x^3*y + 65*x^2*y^2 + 40*x*y^3 + 41*y^4)"
    )
    assert canlink.iterated_split(quartic, ["x", "y", "z"], ["x", "y"], 19) == "0"
    assert canlink.iterated_split(quartic, ["x", "y", "z"], ["x", "y"], 20) == "z^20"


def test_classify():
    out = canlink.classify("x_1*x_2 + x_3^4 + x_4^4", ["x_1", "x_2", "x_3", "x_4"])
    assert out["kind"] == "index"
    assert out["index"] == 3
    assert out["quad_rank"] == 2


def test_family_dims():
    families = ["1", "2", "3", "4", "5", "6", "7.1", "8"]
    dims = [canlink.family_dim(f) for f in families]
    assert dims == [77, 74, 70, 65, 59, 52, 44, 35], dims
    assert all(canlink.family_dim(f"7.{s}") == 44 for s in (1, 2, 3, 4))


def test_family_residual():
    assert canlink.family_residual("4", 4) == "0"
    assert canlink.family_residual("4", 5) != "0"


def test_walk_link():
    link = (
        "vars: u x y z alpha xi t\n"
        "row1: 0 1 1 1 3 5 1\n"
        "row2: -1 0 1 1 3 6 2\n"
        "wall: 2\n"
        "exceptional: u\n"
    )
    steps = canlink.walk_link(link)
    assert [s["kind"] for s in steps] == [
        "divisorial-contraction",
        "wall-crossing",
        "divisorial-contraction",
    ]
    assert steps[0]["target"] == "P(1,1,1,1,3,5)"
    assert steps[2]["target"] == "P(1,1,1,2,3,4)"


def test_errors_are_typed():
    try:
        canlink.split("x +", ["x"], "x", 4)
    except canlink.CanlinkError:
        pass
    else:
        raise AssertionError("expected a parse failure")


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok: {test.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())


def test_family_check_and_generality():
    member = canlink.family_check("5", "b_0 = 1/2\nd_6 = y^6 + z^6\n")
    assert member["member"] is True
    assert member["residual"] == "y^6 + z^6"

    tampered = canlink.family_check("4", "a_2 = y*z\nb_4 = y^2*z^2 + y^4\nd_6 = y^6 + z^6\n")
    assert tampered["member"] is False
    assert any(c["condition"] == "4" and not c["pass"] for c in tampered["checks"])

    gen = canlink.family_generality("5", "a_2 = y*z\nd_6 = y^6 + z^6\n")
    assert gen["pass"] is True and gen["count"] == 4
    assert canlink.family_generality("8", "a_0 = 1\nA_0 = 1\n")["pass"] is False
