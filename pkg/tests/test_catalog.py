import pytest

from bnsr import (
    Free,
    FreeAbelian,
    SigmaRecord,
    builtin_catalog,
    catalog_violations,
    cross_validate,
    embed,
    empty_set,
    equals,
    full_sphere,
    meinert_report,
    theorem2_applicability,
    theorem3_check,
    union,
    verify_product_formula,
)
from bnsr.catalog import HOMOLOGICAL_TAGS, MAX_DEGREE, PRODUCT_PAIRS
from bnsr.groups import product

CAT = builtin_catalog()
Z1 = FreeAbelian(1)
Z2 = FreeAbelian(2)
Z3 = FreeAbelian(3)
F2 = Free(2)


def test_lookup_free_abelian_empty_complements():
    rec = CAT.lookup(Z3, 2, "Q")
    assert not rec.complement.cells


def test_lookup_free_group_full_complement():
    rec = CAT.lookup(F2, 1, "Q")
    assert equals(rec.complement, full_sphere(F2))


def test_lookup_degree_zero_anchor():
    rec = CAT.lookup(F2, 0, "Z")
    assert not rec.complement.cells


def test_lookup_missing_record():
    with pytest.raises(KeyError):
        CAT.lookup(FreeAbelian(7), 1, "Q")


def test_catalog_monotone_and_inside_sphere():
    assert catalog_violations(CAT) == []


def test_product_formula_zxz():
    rep = verify_product_formula(CAT, Z1, Z1, 1, "Q")
    assert rep.equal


def test_product_formula_f2xf2_all_degrees():
    for n in (1, 2, 3):
        rep = verify_product_formula(CAT, F2, F2, n, "Q")
        assert rep.equal, f"degree {n}"


def test_product_formula_expected_shapes():
    P = product(F2, F2)
    rec1 = CAT.lookup(P, 1, "Q")
    expected = union(
        embed(full_sphere(F2), "left", F2, F2), embed(full_sphere(F2), "right", F2, F2)
    )
    assert equals(rec1.complement, expected)
    rec2 = CAT.lookup(P, 2, "Q")
    assert equals(rec2.complement, full_sphere(P))


def test_meinert_inclusion_all_pairs_rings_degrees():
    for G, H in PRODUCT_PAIRS:
        for tag in HOMOLOGICAL_TAGS:
            for n in range(MAX_DEGREE + 1):
                assert meinert_report(CAT, G, H, n, tag), (G, H, n, tag)


def test_theorem2_applicability_builtin():
    rep = theorem2_applicability(CAT, F2, F2, 3)
    assert rep.applicable and rep.z_formula_equal
    rep = theorem2_applicability(CAT, Z2, F2, 2)
    assert rep.applicable and rep.z_formula_equal


def test_theorem2_negative_control():
    # inject a synthetic group whose Z and Q records disagree
    g = FreeAbelian(1, generators=("s",))
    fake = [
        SigmaRecord(g, n, "Z", full_sphere(g) if n else empty_set(1), "synthetic Z record")
        for n in range(2)
    ] + [
        SigmaRecord(g, n, "Q", empty_set(1), "synthetic Q record")
        for n in range(2)
    ] + [
        SigmaRecord(product(g, g), n, "Z", empty_set(2), "synthetic product record")
        for n in range(2)
    ]
    cat2 = CAT.merge(fake)
    rep = theorem2_applicability(cat2, g, g, 1)
    assert not rep.applicable


def test_theorem3_checks_and_refuses():
    for n in (1, 2, 3):
        assert theorem3_check(CAT, F2, F2, n).equal
    assert theorem3_check(CAT, Z2, F2, 2).equal
    with pytest.raises(ValueError):
        theorem3_check(CAT, F2, F2, 4)


def test_cross_validate_z2():
    rec = CAT.lookup(Z2, 2, "Q")
    rep = cross_validate(rec, [(1, 0), (0, -1), (2, -3), (1, 1)], radius=4, lambda_max=2)
    assert rep.consistent, rep.to_dict()


def test_cross_validate_f2():
    rec = CAT.lookup(F2, 1, "Q")
    rep = cross_validate(rec, [(1, 0), (-1, 2)], radius=5, lambda_max=3)
    assert rep.consistent, rep.to_dict()


def test_cross_validate_rejects_homotopical():
    rec = CAT.lookup(F2, 1, "homotopical")
    with pytest.raises(ValueError):
        cross_validate(rec, [(1, 0)], radius=3)


def test_merge_requires_shadow_flag():
    rec = CAT.lookup(F2, 1, "Q")
    clone = SigmaRecord(rec.group, rec.degree, rec.ring_tag, rec.complement, "user override")
    with pytest.raises(ValueError):
        CAT.merge([clone])
    merged = CAT.merge([clone], shadow=True)
    assert merged.lookup(F2, 1, "Q").provenance == "user override"


def test_record_serialization_roundtrip():
    rec = CAT.lookup(product(F2, F2), 1, "Q")
    back = SigmaRecord.from_dict(rec.to_dict())
    assert back.group == rec.group and back.degree == rec.degree
    assert equals(back.complement, rec.complement)


def test_cross_validate_product_embedded_vs_generic():
    P = product(F2, F2)
    rec = CAT.lookup(P, 1, "Q")
    # a direction inside an embedded factor sphere must fail the probe; the
    # factor carrying the filling defect needs the larger radius, while the
    # other factor stays small so probing stays cheap
    rep = cross_validate(rec, [(1, 0, 0, 0)], radius=(4, 2), lambda_max=2)
    assert rep.consistent, rep.to_dict()
    assert rep.entries[0]["in_complement"] and not rep.entries[0]["probe_passed"]
    # a generic direction certifies at a balanced window: small lags need
    # headroom in both factors, so the window must not starve either side
    rep = cross_validate(rec, [(1, 0, 1, 0)], radius=(3, 3), lambda_max=2)
    assert rep.consistent, rep.to_dict()
    assert not rep.entries[0]["in_complement"] and rep.entries[0]["probe_passed"]
