from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from sphecke.experiments import (
    ExperimentConfig,
    ExperimentRecord,
    central_value_report,
    emit,
    gaussian_moment,
    read_csv_records,
    run_identity,
    run_mass,
    run_moments,
    run_third_moment,
)
from sphecke.hecke import invariant_dimension
from sphecke.poly import quadrature_integral
from sphecke.quat import HURWITZ, LIPSCHITZ

# Exact anchors for the degree-4 invariant eigenfunction, frozen from the
# exact integrator and cross-checked against Gauss-Legendre quadrature
# (agreement 1.3e-15): raw third moment E[psi^3], squared L2 norm E[psi^2]
# of the integer-primitive eigenvector, and the normalized third moment
# E[psi^3] / E[psi^2]^(3/2) = 18 sqrt(21) / 143.
NU4_THIRD_MOMENT_RAW = Fraction(48, 1001)
NU4_L2_NORM_SQ = Fraction(4, 21)
NU4_THIRD_MOMENT = 0.5768277098545813


# ---------------------------------------------------------------------------
# configuration


def test_config_defaults():
    config = ExperimentConfig()
    assert config.order_spec is HURWITZ
    assert config.nu_min == 4 and config.nu_max == 48
    assert config.primes == (3, 5)
    assert config.q_list == (1, 2, 3, 4)


def test_config_order_kinds():
    assert ExperimentConfig(order_kind="lipschitz").order_spec is LIPSCHITZ
    with pytest.raises(ValueError):
        ExperimentConfig(order_kind="bogus")


@pytest.mark.parametrize(
    "changes",
    [
        {"nu_min": 0},
        {"nu_min": 6, "nu_max": 5},
        {"primes": ()},
        {"primes": (2,)},
        {"primes": (9,)},
        {"q_list": ()},
        {"q_list": (0,)},
        {"test_degree": -1},
        {"quadrature_order": 0},
        {"exact_limit": -1},
        {"nu_min": "x"},
        {"quadrature_order": 2.5},
    ],
)
def test_config_rejects_bad_values(changes):
    with pytest.raises(ValueError):
        ExperimentConfig(**changes)


def test_config_from_json_roundtrip(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(
        json.dumps(
            {
                "order_kind": "lipschitz",
                "nu_min": 3,
                "nu_max": 7,
                "primes": [3, 7],
                "q_list": [2, 3],
            }
        )
    )
    config = ExperimentConfig.from_json(path)
    assert config.order_kind == "lipschitz"
    assert config.primes == (3, 7)
    assert config.q_list == (2, 3)


def test_config_from_json_rejects_unknown_keys(tmp_path):
    path = tmp_path / "config.json"
    path.write_text('{"wavelength": 42}')
    with pytest.raises(ValueError, match="unknown keys"):
        ExperimentConfig.from_json(path)


def test_config_from_json_rejects_bad_json(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("not json")
    with pytest.raises(ValueError, match="not valid JSON"):
        ExperimentConfig.from_json(path)


def test_config_with_updates():
    config = ExperimentConfig().with_updates(nu_max=8, primes=(3,))
    assert config.nu_max == 8 and config.primes == (3,)


def test_resolve_quadrature_order():
    config = ExperimentConfig()
    assert config.resolve_quadrature_order(12) == 7
    assert config.resolve_quadrature_order(13) == 7
    fixed = ExperimentConfig(quadrature_order=30)
    assert fixed.resolve_quadrature_order(12) == 30
    with pytest.raises(ValueError, match="insufficient"):
        fixed.resolve_quadrature_order(60)


def test_tolerance_override():
    config = ExperimentConfig(tolerances={"ratio-agreement": 1e-3})
    assert config.tolerance("ratio-agreement", 1e-6) == 1e-3
    assert config.tolerance("other", 0.5) == 0.5


def test_gaussian_moments():
    assert [gaussian_moment(q) for q in (1, 2, 3, 4, 5, 6, 8)] == [
        0.0,
        1.0,
        0.0,
        3.0,
        0.0,
        15.0,
        105.0,
    ]
    with pytest.raises(ValueError):
        gaussian_moment(-1)


# ---------------------------------------------------------------------------
# mass expansion


def test_mass_constant_test_function_is_probability():
    records = run_mass(ExperimentConfig(nu_min=3, nu_max=5, test_degree=0))
    assert len(records) == 7 + 9 + 11
    for record in records:
        assert record.value == pytest.approx(1.0, abs=1e-10)


def test_mass_small_degree_vanishes_by_bookkeeping():
    records = run_mass(ExperimentConfig(nu_min=1, nu_max=1, test_degree=4))
    assert len(records) == 3
    for record in records:
        assert record.value == 0.0 and record.err == 0.0
        assert record.aux["route"] == "degree-bookkeeping"


def test_mass_invariant_self_pairing_matches_exact_value():
    # the mass of the degree-4 invariant eigenfunction against itself is
    # its own normalized third moment
    records = run_mass(ExperimentConfig(nu_min=4, nu_max=4, test_degree=4))
    assert len(records) == 9
    invariant = [r for r in records if r.aux.get("invariant")]
    assert len(invariant) == 1
    assert invariant[0].value == pytest.approx(NU4_THIRD_MOMENT, abs=1e-10)


def test_mass_records_carry_eigendata():
    records = run_mass(ExperimentConfig(nu_min=5, nu_max=5))
    assert len(records) == 11
    for record in records:
        assert record.quantity == "mass"
        assert len(record.aux["eigenvalues"]) == 2
        assert record.aux["route"] == "quadrature"


def test_mass_insufficient_quadrature_order():
    with pytest.raises(ValueError, match="insufficient"):
        run_mass(ExperimentConfig(nu_min=6, nu_max=6, quadrature_order=4))


# ---------------------------------------------------------------------------
# moments


def test_moments_first_two_are_exact():
    records = run_moments(ExperimentConfig(nu_min=3, nu_max=6))
    m1 = [r for r in records if r.quantity == "m1"]
    m2 = [r for r in records if r.quantity == "m2"]
    assert m1 and m2
    assert all(r.value == 0.0 and r.err == 0.0 for r in m1)
    assert all(r.value == 1.0 and r.err == 0.0 for r in m2)


def test_moments_parity_route_is_exact_zero():
    records = run_moments(ExperimentConfig(nu_min=5, nu_max=5, q_list=(3,)))
    assert len(records) == 11
    for record in records:
        assert record.value == 0.0
        assert record.aux["route"] == "parity"


def test_moments_third_matches_exact_anchor():
    records = run_moments(ExperimentConfig(nu_min=4, nu_max=4, q_list=(3,)))
    invariant = [r for r in records if r.aux.get("invariant")]
    assert len(invariant) == 1
    # the floating point eigenfunction may differ from the exact one by a
    # global sign, so compare through the absolute value
    assert abs(invariant[0].value) == pytest.approx(NU4_THIRD_MOMENT, abs=1e-10)


def test_moments_fourth_attaches_gaussian_reference():
    records = run_moments(ExperimentConfig(nu_min=4, nu_max=5, q_list=(4,)))
    assert all(r.aux["gaussian_moment"] == 3.0 for r in records)
    assert all(r.value > 0.0 for r in records)


def test_moments_quadrature_agrees_with_exact_integration():
    # invariant: quadrature moments match exact polynomial integration
    # wherever both routes are available
    from sphecke.hecke import invariant_eigen_split
    from sphecke.poly import l2_probability_norm_sq, sphere_integral

    records = run_moments(ExperimentConfig(nu_min=6, nu_max=6, q_list=(3, 4)))
    got3 = sorted(abs(r.value) for r in records if r.quantity == "m3" and r.aux.get("invariant"))
    got4 = sorted(r.value for r in records if r.quantity == "m4" and r.aux.get("invariant"))
    want3, want4 = [], []
    for vec, _ in invariant_eigen_split(6, primes=(3, 5)):
        norm_sq = l2_probability_norm_sq(vec)
        cube = sphere_integral(vec * vec * vec, normalized=True).rat
        fourth = sphere_integral(vec * vec * vec * vec, normalized=True).rat
        want3.append(abs(float(cube) / float(norm_sq) ** 1.5))
        want4.append(float(fourth) / float(norm_sq) ** 2)
    assert got3 == pytest.approx(sorted(want3), abs=1e-10)
    assert got4 == pytest.approx(sorted(want4), abs=1e-10)


# ---------------------------------------------------------------------------
# third moments


def test_third_moment_odd_degrees_vanish_exactly():
    records = run_third_moment(ExperimentConfig(nu_min=3, nu_max=15))
    odd = [r for r in records if r.nu % 2 == 1]
    assert odd
    for record in odd:
        assert record.value == 0.0 and record.err == 0.0
        assert record.aux["route"] == "parity"
    for nu in (3, 5, 7, 9, 11, 13, 15):
        count = sum(1 for r in odd if r.nu == nu)
        assert count == invariant_dimension(nu, HURWITZ)


def test_third_moment_nu4_exact_value():
    (record,) = run_third_moment(ExperimentConfig(nu_min=4, nu_max=4))
    assert record.aux["route"] == "exact"
    assert record.err == 0.0
    assert Fraction(record.aux["third_moment_raw"]) == NU4_THIRD_MOMENT_RAW
    assert Fraction(record.aux["l2_norm_sq"]) == NU4_L2_NORM_SQ
    assert record.value == pytest.approx(NU4_THIRD_MOMENT, abs=1e-14)


def test_third_moment_exact_and_quadrature_routes_agree():
    exact = run_third_moment(ExperimentConfig(nu_min=6, nu_max=6))
    quad = run_third_moment(ExperimentConfig(nu_min=6, nu_max=6, exact_limit=0))
    assert [r.aux["route"] for r in exact] == ["exact", "exact"]
    assert [r.aux["route"] for r in quad] == ["quadrature", "quadrature"]
    got = sorted(abs(r.value) for r in quad)
    want = sorted(abs(r.value) for r in exact)
    assert got == pytest.approx(want, abs=1e-10)


def test_third_moment_irrational_block_falls_back():
    records = run_third_moment(ExperimentConfig(nu_min=12, nu_max=12))
    assert records
    assert all(r.aux["route"] == "quadrature" for r in records)


def test_third_moment_quadrature_route_against_oracle():
    # degree-6 quadrature values rechecked against the generic polynomial
    # quadrature oracle applied to the exact eigenvectors
    from sphecke.hecke import invariant_eigen_split

    records = run_third_moment(ExperimentConfig(nu_min=6, nu_max=6, exact_limit=0))
    got = sorted(abs(r.value) for r in records)
    want = []
    for vec, _ in invariant_eigen_split(6, primes=(3, 5)):
        m2 = quadrature_integral(vec * vec)
        m3 = quadrature_integral(vec * vec * vec)
        want.append(abs(m3) / m2 ** 1.5)
    assert got == pytest.approx(sorted(want), abs=1e-10)


# ---------------------------------------------------------------------------
# central-value identity


def test_identity_single_triple_structure():
    report = run_identity(nus=(4,), direct_check=False)
    (triple,) = report["triples"]
    assert triple["weight"] == 10 and triple["level"] == 2
    assert triple["newform_a3"] == -156
    assert triple["ratio"] > 0
    assert triple["ratio_relative_error"] < 1e-3
    assert triple["symmetric_cube"]["fitted_sign"] in (-1, 1)
    parity = report["parity_zero"]
    assert parity["consistent"]
    assert Fraction(parity["sphere_triple_integral"]) == 0
    assert parity["sym3_fitted_sign"] == -1
    # the whole report must be JSON-serializable for the CLI mirror
    json.dumps(report)


def test_identity_is_deterministic():
    first = run_identity(nus=(4,), direct_check=False)
    second = run_identity(nus=(4,), direct_check=False)
    assert first["triples"][0]["ratio"] == second["triples"][0]["ratio"]


def test_central_value_report_validation():
    with pytest.raises(ValueError):
        central_value_report(9)
    with pytest.raises(ValueError):
        central_value_report(10, "bogus")
    with pytest.raises(ValueError):
        central_value_report(10, "gl2", "minus")
    with pytest.raises(ValueError):
        central_value_report(14, "triple", "minus")


def test_central_value_report_gl2_weight8():
    report = central_value_report(8, "gl2")
    assert report["conductor"] == 2
    assert report["sign"] in (-1, 1)
    assert report["completed_error"] < abs(report["completed_central"]) * 1e-6 or (
        abs(report["completed_central"]) <= 3 * report["completed_error"]
    )


# ---------------------------------------------------------------------------
# emission


def _sample_records():
    return [
        ExperimentRecord(5, 1, "m3", 0.25, 1e-12, {"route": "quadrature"}),
        ExperimentRecord(4, 0, "m3", 0.5768277098545813, 0.0, {"route": "exact"}),
        ExperimentRecord(4, 0, "mass", 1.0, 0.0, {}),
    ]


def test_emit_requires_records(tmp_path):
    with pytest.raises(ValueError, match="no records"):
        emit([], tmp_path)


def test_emit_rejects_unknown_format(tmp_path):
    with pytest.raises(ValueError, match="unknown format"):
        emit(_sample_records(), tmp_path, formats=("pdf",))


def test_emit_csv_schema_and_order(tmp_path):
    paths = emit(_sample_records(), tmp_path, formats=("csv",))
    lines = paths["csv"].read_text().splitlines()
    assert lines[0] == "nu,index,quantity,value,err"
    assert lines[1] == "4,0,m3,0.5768277098545813,0.0"
    assert lines[2].startswith("5,1,m3,0.25,")
    assert lines[3].startswith("4,0,mass,1.0,")


def test_emit_csv_roundtrip(tmp_path):
    records = _sample_records()
    paths = emit(records, tmp_path, formats=("csv",))
    back = read_csv_records(paths["csv"])
    expected = sorted(records, key=lambda r: (r.quantity, r.nu, r.index))
    assert [(r.nu, r.index, r.quantity, r.value, r.err) for r in back] == [
        (r.nu, r.index, r.quantity, r.value, r.err) for r in expected
    ]


def test_emit_is_byte_deterministic(tmp_path):
    records = _sample_records()
    first = emit(records, tmp_path / "a", stem="t")
    second = emit(records, tmp_path / "b", stem="t")
    for fmt in ("csv", "json", "svg-plot"):
        assert first[fmt].read_bytes() == second[fmt].read_bytes()


def test_emit_json_mirrors_aux(tmp_path):
    paths = emit(_sample_records(), tmp_path, formats=("json",))
    data = json.loads(paths["json"].read_text())
    assert len(data) == 3
    assert data[0]["quantity"] == "m3" and data[0]["aux"]["route"] == "exact"


def test_read_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n")
    with pytest.raises(ValueError, match="bad header"):
        read_csv_records(path)


# ---------------------------------------------------------------------------
# command line


def test_cli_eigenbasis_runs(capsys):
    from sphecke.cli import main

    assert main(["eigenbasis", "--nu-min", "3", "--nu-max", "3"]) == 0
    out = capsys.readouterr().out
    assert "nu=3" in out and "lambda_3" in out


def test_cli_theta_lifts_eta_product(capsys):
    from sphecke.cli import main

    assert main(["theta", "--nu-min", "3", "--nu-max", "3", "--n-max", "5"]) == 0
    out = capsys.readouterr().out
    assert "weight=8" in out
    assert "2 -8" in out and "5 -210" in out


def test_cli_theta_irrational_split_is_computational_failure(capsys):
    from sphecke.cli import main

    assert main(["theta", "--nu-min", "12", "--nu-max", "12"]) == 1


def test_cli_rejects_bad_flags():
    from sphecke.cli import main

    with pytest.raises(SystemExit) as info:
        main(["eigenbasis", "--order", "bogus"])
    assert info.value.code == 2


def test_cli_rejects_bad_config(tmp_path):
    from sphecke.cli import main

    path = tmp_path / "config.json"
    path.write_text('{"nu_min": "x"}')
    with pytest.raises(SystemExit) as info:
        main(["eigenbasis", "--config", str(path)])
    assert info.value.code == 2


def test_cli_config_file_with_flag_overrides(tmp_path, capsys):
    from sphecke.cli import main

    path = tmp_path / "config.json"
    path.write_text('{"nu_min": 3, "nu_max": 12}')
    assert main(["eigenbasis", "--config", str(path), "--nu-max", "3"]) == 0
    out = capsys.readouterr().out
    assert "nu=3" in out and "nu=4" not in out


def test_cli_third_moment_writes_tables(tmp_path, capsys):
    from sphecke.cli import main

    code = main(
        [
            "third-moment",
            "--nu-min",
            "3",
            "--nu-max",
            "6",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 0
    records = read_csv_records(tmp_path / "third-moment.csv")
    # degree 5 has no invariant eigenfunctions, so no row appears for it
    assert {r.nu for r in records} == {3, 4, 6}
    assert (tmp_path / "third-moment.json").exists()
    assert (tmp_path / "third-moment.svg").exists()


def test_cli_lvalue_prints_report(capsys):
    from sphecke.cli import main

    assert main(["lvalue", "--weight", "8", "--kind", "gl2"]) == 0
    out = capsys.readouterr().out
    assert "finite_central:" in out and "conductor: 2" in out
