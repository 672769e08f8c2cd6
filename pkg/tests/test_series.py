"""Series engine: factor model, exact oracle, extrapolation honesty."""

from fractions import Fraction
from math import pi

import pytest

from mzv.errors import AdmissibilityError, DivergentSeriesError, InvalidSpecError
from mzv.indices import MzvIndex
from mzv.rng import XorShift64Star
from mzv.series import (
    EngineConfig,
    EvalResult,
    ExtraPower,
    FiniteDifference,
    NestedSumSpec,
    RisingFactorial,
    ShiftedPower,
    decay_model,
    evaluate,
    evaluate_exact_truncated,
    extrapolate_tail,
    finite_difference_factor,
    finite_difference_factor_exact,
    mzv,
    mzv_spec,
    partial_sums,
)

# frozen reference values (independent sources, double precision)
ZETA2 = 1.6449340668482264
ZETA3 = 1.2020569031595943
ZETA4 = 1.0823232337111382
ZETA_1_3 = pi**4 / 360.0  # weight-4 double zeta with a leading 1


def spec_of(*bundles):
    return NestedSumSpec(tuple(tuple(b) for b in bundles))


# ---------------------------------------------------------------------------
# factors and spec validation


def test_factor_validation():
    with pytest.raises(InvalidSpecError):
        ShiftedPower(-1, 1)
    with pytest.raises(InvalidSpecError):
        ShiftedPower(0.5, 0)
    with pytest.raises(InvalidSpecError):
        ExtraPower(-1, 1)
    with pytest.raises(InvalidSpecError):
        ExtraPower(0.5, 1)  # integer shifts only
    with pytest.raises(InvalidSpecError):
        RisingFactorial(-1)
    with pytest.raises(InvalidSpecError):
        FiniteDifference(2, 0)


def test_spec_validation():
    with pytest.raises(InvalidSpecError):
        NestedSumSpec(())
    with pytest.raises(InvalidSpecError):
        NestedSumSpec((("not a factor",),))
    with pytest.raises(InvalidSpecError):
        NestedSumSpec(((),))  # empty bundle


def test_spec_json_roundtrip():
    spec = spec_of(
        [ShiftedPower(Fraction(1, 3), 2), RisingFactorial(2)],
        [ExtraPower(1, 3), FiniteDifference(2, 1)],
    )
    again = NestedSumSpec.from_dict(spec.as_dict())
    assert again == spec
    assert again.factors[0][0].shift == Fraction(1, 3)


def test_spec_json_rejects_junk():
    with pytest.raises(InvalidSpecError):
        NestedSumSpec.from_dict({"factors": [[{"kind": "nope"}]]})
    with pytest.raises(InvalidSpecError):
        NestedSumSpec.from_dict({"nope": []})


# ---------------------------------------------------------------------------
# decay model and divergence


def test_decay_model_plain_zeta():
    s, logp = decay_model(mzv_spec(MzvIndex((2,))))
    assert s == 2 and logp == 0


def test_decay_model_ones_run_log_power():
    # each harmonic prefix level contributes one logarithm to the tail
    s, logp = decay_model(mzv_spec(MzvIndex((1, 1, 2))))
    assert s == 2 and logp == 2


def test_decay_model_rising_and_difference_factors():
    # rising factorial eats into the power decay ...
    s, _ = decay_model(spec_of([RisingFactorial(1), ExtraPower(0, 3)]))
    assert s == 2
    # ... and a growing rising factorial can break convergence outright
    s, _ = decay_model(spec_of([RisingFactorial(2), ExtraPower(0, 1)]))
    assert s < 2
    # a finite difference of order r decays like r + exponent
    s, _ = decay_model(spec_of([FiniteDifference(2, 1)]))
    assert s == 3


def test_divergent_specs_rejected():
    with pytest.raises(DivergentSeriesError):
        evaluate(spec_of([ExtraPower(0, 1)]))
    with pytest.raises(DivergentSeriesError):
        evaluate(spec_of([RisingFactorial(2), ExtraPower(0, 1)]))
    with pytest.raises(AdmissibilityError):
        mzv(MzvIndex((1, 1)))
    with pytest.raises(AdmissibilityError):
        mzv(MzvIndex((2, 1)))


# ---------------------------------------------------------------------------
# exact rational oracle


def test_exact_small_values():
    assert evaluate_exact_truncated(mzv_spec(MzvIndex((2,))), 2) == Fraction(5, 4)
    assert evaluate_exact_truncated(mzv_spec(MzvIndex((1, 2))), 3) == Fraction(5, 12)
    # telescoping-style product 1/(k(k+2)) at cutoff 3
    tele = spec_of([ExtraPower(0, 1), ExtraPower(2, 1)])
    assert evaluate_exact_truncated(tele, 3) == Fraction(21, 40)
    assert evaluate_exact_truncated(tele, 0) == 0


def _random_spec(rng):
    depth = rng.randint(1, 3)
    bundles = []
    for _ in range(depth):
        kind = rng.randint(0, 3)
        if kind == 0:
            shift = Fraction(rng.randint(-2, 7), rng.randint(1, 5))
            bundles.append([ShiftedPower(shift if shift > -1 else Fraction(1, 2), rng.randint(1, 2))])
        elif kind == 1:
            bundles.append([ExtraPower(rng.randint(0, 3), rng.randint(1, 2))])
        elif kind == 2:
            bundles.append([RisingFactorial(rng.randint(0, 2)), ExtraPower(0, 1)])
        else:
            bundles.append([FiniteDifference(rng.randint(0, 2), rng.randint(1, 2))])
    return spec_of(*bundles)


def test_float_matches_exact_partials():
    rng = XorShift64Star(2024)
    for _ in range(8):
        spec = _random_spec(rng)
        exact = float(evaluate_exact_truncated(spec, 200))
        approx = partial_sums(spec, [200])[0]
        scale = max(1.0, abs(exact))
        assert abs(approx - exact) <= 1e-13 * scale, spec


def test_partial_sums_monotone_cutoffs_required():
    spec = mzv_spec(MzvIndex((2,)))
    with pytest.raises(InvalidSpecError):
        partial_sums(spec, [10, 10])
    assert partial_sums(spec, []) == []


# ---------------------------------------------------------------------------
# finite-difference factor


def test_fd_exact_small():
    assert finite_difference_factor_exact(2, 2, 1) == Fraction(1, 12)
    # order 0 reduces to a plain inverse power
    assert finite_difference_factor_exact(3, 0, 2) == Fraction(1, 9)


@pytest.mark.parametrize("ell", [1, 2, 5, 17])
@pytest.mark.parametrize("r", [0, 1, 3])
def test_fd_closed_form_exponent_one(ell, r):
    num = Fraction(1)
    for i in range(r + 1):
        num /= ell + i
    import math

    assert finite_difference_factor_exact(ell, r, 1) == math.factorial(r) * num


def test_fd_float_matches_exact():
    for ell in (1, 3, 10, 100):
        for r in (0, 2, 4):
            for p in (1, 2, 5):
                exact = float(finite_difference_factor_exact(ell, r, p))
                assert finite_difference_factor(ell, r, p) == pytest.approx(exact, rel=1e-13)


def test_fd_large_argument_uses_float_path():
    v = finite_difference_factor(10**6, 2, 2)
    # ~ r! * log-ish scale / ell^(r+1); just pin positivity and magnitude
    assert 0 < v < 1e-15


def test_fd_validation():
    with pytest.raises(InvalidSpecError):
        finite_difference_factor(0, 1, 1)
    with pytest.raises(InvalidSpecError):
        finite_difference_factor(2, -1, 1)


# ---------------------------------------------------------------------------
# tail extrapolation as a standalone operation


def test_extrapolate_plain_zeta():
    spec = mzv_spec(MzvIndex((2,)))
    cutoffs = [256, 362, 512, 724, 1024, 1448, 2048, 2896, 4096]
    sums = partial_sums(spec, cutoffs)
    res = extrapolate_tail(cutoffs, sums, 2)
    assert res.mode == "float-extrapolated"
    truncation = ZETA2 - sums[-1]
    assert abs(res.value - ZETA2) < truncation / 1000  # far beyond raw truncation
    assert abs(res.value - ZETA2) <= res.tail_bound


def test_extrapolate_with_log_power():
    spec = mzv_spec(MzvIndex((1, 2)))
    cutoffs = [int(round(2 ** (j / 2))) for j in range(16, 27)]
    sums = partial_sums(spec, cutoffs)
    res = extrapolate_tail(cutoffs, sums, 2, max_log_power=1)
    assert abs(res.value - ZETA3) <= max(res.tail_bound, 1e-10)


def test_extrapolate_degenerate_constant():
    res = extrapolate_tail([10, 20, 30, 40], [1.5, 1.5, 1.5, 1.5], 3)
    assert (res.value, res.tail_bound, res.mode) == (1.5, 0.0, "float")


def test_extrapolate_input_validation():
    with pytest.raises(InvalidSpecError):
        extrapolate_tail([10, 20], [1.0, 2.0], 2)  # need >= 3 points
    with pytest.raises(InvalidSpecError):
        extrapolate_tail([10, 20, 15], [1.0, 2.0, 3.0], 2)
    with pytest.raises(InvalidSpecError):
        extrapolate_tail([10, 20, 30], [1.0, float("nan"), 3.0], 2)
    with pytest.raises(InvalidSpecError):
        extrapolate_tail([10, 20, 30], [3.0, 2.0, 1.0], 2)  # decreasing


# ---------------------------------------------------------------------------
# end-to-end evaluation honesty


@pytest.mark.parametrize(
    "parts,reference",
    [
        ((2,), ZETA2),
        ((3,), ZETA3),
        ((4,), ZETA4),
        ((1, 2), ZETA3),
        ((1, 3), ZETA_1_3),
        ((2, 2), (ZETA2**2 - ZETA4) / 2.0),
        ((1, 1, 2), ZETA4),
    ],
)
def test_mzv_against_frozen_values(parts, reference):
    res = mzv(MzvIndex(parts), 1e-9)
    assert res.accuracy_met
    assert abs(res.value - reference) <= res.tail_bound + 1e-12
    assert abs(res.value - reference) <= 1e-9


def test_eval_result_shape():
    res = evaluate(spec_of([ShiftedPower(0.5, 2)]), 1e-9)
    assert isinstance(res, EvalResult)
    d = res.as_dict()
    assert set(d) == {"value", "tail_bound", "cutoff", "mode", "accuracy_met", "flags"}
    assert d["accuracy_met"] is True


def test_cutoff_exhaustion_is_flagged():
    tight = EngineConfig(start_cutoff=1 << 8, max_cutoff=1 << 10)
    res = evaluate(mzv_spec(MzvIndex((1, 1, 2))), 1e-12, tight)
    assert not res.accuracy_met
    assert "cutoff-exhausted" in res.flags
    assert res.tail_bound > 0


def test_slow_convergence_flag():
    res = evaluate(spec_of([ShiftedPower(-0.9999, 2)]), 1e-6)
    assert "slow-convergence" in res.flags


def test_target_accuracy_validation():
    with pytest.raises(InvalidSpecError):
        evaluate(mzv_spec(MzvIndex((2,))), 0.0)
    with pytest.raises(InvalidSpecError):
        evaluate(mzv_spec(MzvIndex((2,))), -1e-9)


def test_shifted_power_matches_integer_extra_power():
    # same sum expressed through the real-shift and integer-shift factors
    a = evaluate(spec_of([ShiftedPower(2, 2)]), 1e-10)
    b = evaluate(spec_of([ExtraPower(2, 2)]), 1e-10)
    assert a.value == pytest.approx(b.value, abs=1e-10)


def test_fraction_shift_evaluates():
    res = evaluate(spec_of([ShiftedPower(Fraction(1, 2), 2)]), 1e-8)
    # sum 1/(k+1/2)^2 = pi^2/2 - 4
    assert res.value == pytest.approx(pi**2 / 2 - 4, abs=1e-8)


def test_evaluation_is_cached():
    spec = mzv_spec(MzvIndex((1, 1, 2)))
    first = evaluate(spec, 1e-9)
    second = evaluate(spec, 1e-9)
    assert first is second


DEPTH_ONE_ZETAS = {
    2: ZETA2,
    3: ZETA3,
    4: ZETA4,
    5: 1.0369277551433699,
    6: 1.0173430619844491,
}


@pytest.mark.parametrize("exponent", sorted(DEPTH_ONE_ZETAS))
def test_depth_one_zeta_tail_bound_honest(exponent):
    res = evaluate(spec_of([ExtraPower(0, exponent)]), 1e-8)
    assert abs(res.value - DEPTH_ONE_ZETAS[exponent]) <= res.tail_bound + 1e-13


@pytest.mark.parametrize("exponent", [2, 3, 4, 7, 11])
def test_depth_one_against_scipy(exponent):
    scipy_special = pytest.importorskip("scipy.special")
    res = evaluate(spec_of([ExtraPower(0, exponent)]), 1e-10)
    assert res.value == pytest.approx(float(scipy_special.zeta(exponent)), abs=5e-10)


def test_shifted_power_against_scipy_hurwitz():
    scipy_special = pytest.importorskip("scipy.special")
    # sum over k >= 1 of 1/(k+a)^s is the Hurwitz zeta at (s, 1+a)
    res = evaluate(spec_of([ShiftedPower(0.25, 3)]), 1e-10)
    assert res.value == pytest.approx(float(scipy_special.zeta(3, 1.25)), abs=5e-10)
