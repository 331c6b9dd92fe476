"""Smoke test for the acslab extension module; run after `maturin develop`."""

import acslab


def main():
    g = acslab.LieAlgebra("0,0,12,13,14,23")
    assert g.betti_numbers() == [1, 2, 4, 6, 4, 2, 1]
    assert len(g.cohomology(2)) == 4

    j = acslab.AlmostComplexStructure.from_one_zero_forms(6, ["e1 + i*e2", "e4 + i*e6", "e3 + i*e5"])
    assert not j.is_integrable(g)
    assert len(j.type_space("+")) == 9 and len(j.type_space("-")) == 6

    a = acslab.KForm(6, "e26 - e15")
    assert g.d(a).is_zero()
    anti = j.type_space("-")[0]
    assert j.act(anti) == -anti
    assert not g.class_power_vanishes(a, 2)
    assert g.class_power_vanishes(a, 3)

    report = acslab.purity_report(g, j)
    assert report["betti2"] == "4"
    assert report["pure"] == "false"

    torus = acslab.LieAlgebra("0,0,0,0")
    std = acslab.AlmostComplexStructure([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    assert acslab.purity_report(torus, std)["dim_h_plus"] == "4"

    histogram = acslab.rank_scan(samples=2000, seed=1)
    assert set(histogram) <= {0, 4} and sum(histogram.values()) == 2000

    print("smoke test passed:", report)


if __name__ == "__main__":
    main()
