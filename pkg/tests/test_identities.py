import numpy as np
import pytest

from src.identities import (
    IDENTITIES,
    ahlfors_row,
    fischer_row,
    versor_norm_row,
    mobius_map,
    run_identities,
)


def test_default_battery_passes():
    rows = run_identities(IDENTITIES, (2, 3), (1, 2, 3), seed=0xD1AC)
    failed = [r.to_dict() for r in rows if not r.passed]
    assert not failed
    names = {r.name for r in rows}
    assert "Paenitz factorisation" in names
    assert "C_2 relation D_S C_2 = w C_2 - C_1" in names


def test_intertwining_single_case_reports_residual():
    rows = run_identities(("eq1",), (2,), (3,), seed=1)
    assert len(rows) == 1
    assert rows[0].k == 3
    assert rows[0].measured["residual"] <= 1e-8


def test_c2_row_is_labelled_convention_dependent():
    rows = run_identities(("c2",), (3,), (1,), seed=4)
    assert rows[0].status == "convention-dependent"
    assert run_identities(("c2",), (2,), (1,), seed=4) == []


def test_versor_norm_row_covers_ten_thousand_pairs():
    row = versor_norm_row(np.random.default_rng(0))
    assert row.measured["pairs"] >= 9996
    assert row.passed


@pytest.mark.parametrize("N", [2, 3, 4])
def test_fischer_rows_exact(N):
    row = fischer_row(N, m_max=5 if N < 4 else 3)
    assert row.measured["residual"] == 0.0


def test_ahlfors_reports_both_readings():
    row = ahlfors_row(3, "cayley")
    assert row.passed
    assert row.measured["pseudo_determinant_verbatim"] == pytest.approx(-2.0)
    assert row.measured["pseudo_determinant_variant"] == pytest.approx(-2.0)
    assert row.measured["closed_form_gap"] < 1e-12


@pytest.mark.parametrize("name", ["identity", "translation"])
def test_ahlfors_for_other_maps(name):
    assert ahlfors_row(2, name, np.random.default_rng(3)).passed


def test_unknown_names_are_rejected():
    with pytest.raises(ValueError, match="unknown identity"):
        run_identities(("bogus",), (2,), (1,), seed=0)
    with pytest.raises(ValueError, match="unknown map"):
        mobius_map("shear", 2)
