import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from strataforge.couplings import (
    CouplingVector,
    TargetSpec,
    phase_vector,
    synthesize,
    verify_constraints,
)
from strataforge.errors import ValidationError
from strataforge.spectral import spectral_data

PI = math.pi


def constraint_sums(J, t, m):
    """Oracle: evaluate sum_k gamma_k P_i(x_k) exp(-i t sum_l J_l P_l(x_k)) from exact tables."""
    sd = spectral_data(m)
    out = []
    for i in range(m + 1):
        total = 0j
        for k in range(m + 1):
            lam = sum(J[l] * float(sd.P_exact[l][k]) for l in range(m + 1))
            total += float(sd.gamma_exact[k]) * float(sd.P_exact[i][k]) * complex(math.cos(t * lam), -math.sin(t * lam))
        out.append(total)
    return out


def test_phase_vector_ghz():
    m = 4
    phi = phase_vector(TargetSpec(m=m, t=1.0))
    np.testing.assert_allclose(phi, [(-1) ** k * PI / 4 for k in range(m + 1)], atol=1e-15)


def test_phase_vector_near_product_target():
    spec = TargetSpec.from_f_mag(m=2, t=1.0, f_mag=1 - 1e-15, theta=0.3, offsets=(1, 0, 2))
    np.testing.assert_allclose(phase_vector(spec), [0.3 + 2 * PI, 0.3, 0.3 + 4 * PI], atol=1e-6)


def test_phase_vector_offsets():
    phi = phase_vector(TargetSpec(m=2, t=1.0, offsets=(0, 1, 1)))
    np.testing.assert_allclose(phi, [PI / 4, 2 * PI - PI / 4, 2 * PI + PI / 4], atol=1e-15)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(f_mag=0.0, fprime_mag=1.0),
        dict(f_mag=1.0, fprime_mag=0.0),
        dict(f_mag=0.6, fprime_mag=0.6),
        dict(sign_branch=0),
        dict(offsets=(0, 0)),
        dict(t=0.0),
        dict(t=-1.0),
    ],
)
def test_invalid_targets(kwargs):
    base = dict(m=2, t=1.0)
    base.update(kwargs)
    with pytest.raises(ValidationError):
        TargetSpec(**base)


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("theta", [0.0, 0.7])
def test_synthesize_m2_m3_zero_offsets(sign, theta):
    t = 1.7
    J2 = synthesize(TargetSpec(m=2, t=t, theta=theta, sign_branch=sign), spectral_data(2)).J
    np.testing.assert_allclose(J2, [-theta / t, 0, -sign * PI / (4 * t)], atol=1e-12)
    J3 = synthesize(TargetSpec(m=3, t=t, theta=theta, sign_branch=sign), spectral_data(3)).J
    np.testing.assert_allclose(J3, [-theta / t, 0, 0, -sign * PI / (4 * t)], atol=1e-12)


def test_synthesize_m2_offsets():
    t, theta = 1.0, 0.0
    J = synthesize(TargetSpec(m=2, t=t, theta=theta, offsets=(0, 1, 1)), spectral_data(2)).J
    np.testing.assert_allclose(J, [-(3 * theta + 5 * PI) / (3 * t), 2 * PI / (3 * t), PI / (12 * t)], atol=1e-12)


def test_synthesize_rejects_mismatched_m():
    with pytest.raises(ValidationError):
        synthesize(TargetSpec(m=2, t=1.0), spectral_data(3))


@pytest.mark.parametrize("m", range(1, 7))
@pytest.mark.parametrize("sign", [1, -1])
def test_synthesized_couplings_satisfy_constraints(m, sign):
    spec = TargetSpec(m=m, t=0.9, theta=-1.1, sign_branch=sign, offsets=tuple(range(m + 1)))
    J = synthesize(spec, spectral_data(m))
    sums = constraint_sums(J.J, J.t, m)
    assert all(abs(s) < 1e-9 for s in sums[1:m])
    assert abs(sums[0] - spec.f) < 1e-9
    assert abs(sums[m] - spec.fprime) < 1e-9
    report = verify_constraints(J, spectral_data(m))
    assert report.ok()
    np.testing.assert_allclose(report.residuals, [abs(s) for s in sums[1:m]], atol=1e-12)


def test_perturbation_breaks_constraints():
    sd = spectral_data(3)
    J = synthesize(TargetSpec(m=3, t=1.0), sd)
    for k in range(4):
        bumped = list(J.J)
        bumped[k] += 0.1 / J.t
        report = verify_constraints(CouplingVector(bumped, J.t, J.provenance), sd)
        assert report.max_residual > 1e-3 or max(report.target_errors().values()) > 1e-3
        assert not report.ok()


def test_m1_has_no_intermediate_strata():
    sd = spectral_data(1)
    spec = TargetSpec(m=1, t=2.0, theta=0.4)
    report = verify_constraints(synthesize(spec, sd), sd)
    assert report.residuals == []
    assert abs(report.f - spec.f) < 1e-12
    assert abs(report.fprime - spec.fprime) < 1e-12


targets = st.builds(
    lambda m, a, theta, sign, t, offs: TargetSpec.from_f_mag(
        m=m, t=t, f_mag=a, theta=theta, sign_branch=sign, offsets=tuple(offs[: m + 1])),
    m=st.integers(1, 5),
    a=st.floats(0.05, 0.95),
    theta=st.floats(-PI, PI),
    sign=st.sampled_from([1, -1]),
    t=st.floats(0.1, 10.0),
    offs=st.lists(st.integers(-3, 3), min_size=6, max_size=6),
)


@settings(max_examples=500, deadline=None)
@given(targets)
def test_round_trip(spec):
    report = verify_constraints(synthesize(spec, spectral_data(spec.m)), spectral_data(spec.m))
    assert report.max_residual < 1e-9
    errs = report.target_errors()
    assert errs["f_mag"] < 1e-9 and errs["fprime_mag"] < 1e-9 and errs["theta"] < 1e-9
    assert errs["theta_prime"] < 1e-9


@settings(max_examples=100, deadline=None)
@given(targets, st.integers(0, 5), st.integers(-2, 2).filter(bool))
def test_offset_shift_changes_J_not_amplitudes(spec, j, shift):
    j = j % (spec.m + 1)
    offs = list(spec.offsets)
    offs[j] += shift
    sd = spectral_data(spec.m)
    base = verify_constraints(synthesize(spec, sd), sd)
    other_J = synthesize(TargetSpec(m=spec.m, t=spec.t, theta=spec.theta, sign_branch=spec.sign_branch,
                                    offsets=tuple(offs), f_mag=spec.f_mag, fprime_mag=spec.fprime_mag), sd)
    other = verify_constraints(other_J, sd)
    assert np.abs(np.array(other_J.J) - np.array(synthesize(spec, sd).J)).max() > 1e-3
    assert abs(base.f - other.f) < 1e-9
    assert abs(base.fprime - other.fprime) < 1e-9


@pytest.mark.parametrize("m", [2, 3])
def test_sign_branches_give_opposite_quarter_turns(m):
    sd = spectral_data(m)
    for sign in (1, -1):
        spec = TargetSpec(m=m, t=1.0, theta=0.3, sign_branch=sign)
        r = verify_constraints(synthesize(spec, sd), sd)
        delta = np.angle(r.fprime / r.f)
        assert abs(delta - sign * PI / 2) < 1e-9


@pytest.mark.parametrize("m", [2, 3])
def test_linearity_in_theta(m):
    sd = spectral_data(m)
    t = 2.0
    J_a = synthesize(TargetSpec(m=m, t=t, theta=0.1), sd).J
    J_b = synthesize(TargetSpec(m=m, t=t, theta=0.9), sd).J
    assert abs((J_b[0] - J_a[0]) + 0.8 / t) < 1e-12
    np.testing.assert_allclose(J_b[1:], J_a[1:], atol=1e-12)
