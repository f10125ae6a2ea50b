"""Quick end-to-end check of the Python bindings."""

import json

import prfair


def main():
    inst = prfair.Instance.unconstrained([[0.0], [0.0], [1.0]], 3)
    sel = prfair.select_prf_centers(inst)
    assert sel.selected == [0, 1, 2], sel.selected
    assert len(json.loads(sel.trace_json)) == 3

    tm = prfair.Instance.generate("two_mass", {"a": 100, "b": 10})
    x = prfair.select_prf_centers(tm).selected
    assert sum(c < 100 for c in x) == 10
    assert prfair.check(tm, x, "up").satisfied
    swapped = [0] + list(range(100, 110))
    report = prfair.check(tm, swapped, "up")
    assert not report.satisfied and len(report.witness_agents) == 100
    assert prfair.check(tm, swapped, "pf").satisfied

    g, underfilled, padded = prfair.greedy_capture(inst)
    assert g == [0, 2] and underfilled and not padded

    blobs = prfair.Instance.generate("two_blobs")
    centers = prfair.kmeanspp(blobs, seed=1)
    assert len(centers) == blobs.k
    assert prfair.msd_j(blobs, centers, 1) <= prfair.msd_j(blobs, centers, blobs.k)

    try:
        prfair.Instance.generate("nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown generator accepted")
    print("smoke test passed:", inst, tm)


if __name__ == "__main__":
    main()
