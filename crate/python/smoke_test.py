"""Smoke test for the singerlab_py extension.

    pip install --no-build-isolation -e crates/py
    python python/smoke_test.py
"""

import json

import singerlab_py as sl

POINT2 = json.dumps({"prime": 2, "generators": [{"name": "a", "degree": 0}]})
POINT3 = json.dumps({"prime": 3, "generators": [{"name": "a", "degree": 0}]})
BAD = json.dumps({
    "prime": 2,
    "generators": [{"name": "a", "degree": 0}, {"name": "b", "degree": 1}, {"name": "c", "degree": 2}],
    "actions": [{"op": "Sq^1", "src": "a", "dst": "b"}, {"op": "Sq^1", "src": "b", "dst": "c"}],
})


def main():
    chart = sl.ext_chart(POINT2, 3, 8)
    for t in (1, 2, 4, 8):
        assert chart[(1, t)] == 1, t
    assert (1, 3) not in chart
    assert sl.ext_chart_tsv(POINT2, 1, 2).splitlines()[0] == "#singerlab-chart v1"
    assert sl.ext_chart(POINT3, 1, 12) == {(0, 0): 1, (1, 1): 1, (1, 4): 1, (1, 12): 1}

    assert len(sl.rplus_basis(POINT2, 0, 1, 4)) == 4
    assert sl.validate(POINT2) == []
    assert sl.validate(BAD) and "Sq^1 Sq^1" in sl.validate(BAD)[0]
    try:
        sl.validate("{")
    except ValueError as e:
        assert "line 1" in str(e)
    else:
        raise AssertionError("malformed input accepted")

    page = sl.tate_page_tsv(POINT3, (-3, 3), (0, 0))
    assert len(page.splitlines()) == 8
    assert sl.collapse_certified(POINT3, (-3, 3), (0, 0), cohomological=True)

    assert sl.tower_mismatches(POINT2, -12, 2, 4) == []
    for p in (3, 5, 7, 11):
        for q in range(-50, 51):
            a, nu_prev, nu = sl.coeff_alpha(q, p), sl.coeff_nu(q - 1, p), sl.coeff_nu(q, p)
            assert a * pow(nu_prev, -1, p) % p == pow(nu, -1, p)
            assert sl.coeff_nu(q + 1, p) == (-nu_prev) % p
    assert sl.binom_mod_p(-1, 3, 3) == 2
    ok, failures = sl.verify("coeffs", 7)
    assert ok and failures == []
    print("smoke test ok")


if __name__ == "__main__":
    main()
