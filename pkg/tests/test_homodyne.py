import numpy as np
import pytest
from numpy.polynomial import hermite_e
from scipy.stats import norm

from catprep.channels import loss_channel, loss_on_mode_a
from catprep.fock import MixedState, basis_state, fidelity, partial_trace
from catprep.homodyne import (
    Conditioning,
    closed_form_state,
    condition,
    condition_tail,
    marginal_pdf,
    quad_overlaps,
    quad_wavefunctions,
)
from catprep.states import ResourceParams, cat, coherent, cv_pair, hybrid_entangled, squeezed_vacuum


def random_density(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def test_ground_wavefunction_value():
    psi = quad_wavefunctions(1, 0.0)
    assert np.isclose(psi[0, 0], (2 * np.pi) ** (-0.25))
    assert np.isclose(psi[0, 0], 0.6316187363, atol=1e-9)


def test_recursion_matches_hermite_polynomials():
    # psi_n(q) = He_n(q) psi_0(q) / sqrt(n!) with probabilists' polynomials
    qs = np.linspace(-4, 4, 17)
    psi = quad_wavefunctions(7, qs)
    fact = 1.0
    for n in range(7):
        if n > 0:
            fact *= n
        coeffs = np.zeros(n + 1)
        coeffs[n] = 1.0
        expected = hermite_e.hermeval(qs, coeffs) * psi[0] / np.sqrt(fact)
        assert np.allclose(psi[n], expected, atol=1e-12)


def test_wavefunction_orthonormality():
    # range must cover the classical turning point of the highest state
    qs = np.arange(-15, 15, 1e-3)
    psi = quad_wavefunctions(25, qs)
    gram = psi @ psi.T * 1e-3
    assert np.allclose(gram, np.eye(25), atol=1e-10)


def test_overlaps_carry_phase():
    o = quad_overlaps(5, 0.8, 0.6)
    psi = quad_wavefunctions(5, 0.8)[:, 0]
    assert np.allclose(o, np.exp(1j * 0.6 * np.arange(5)) * psi)


def test_marginal_vacuum_is_standard_normal():
    qs = np.linspace(-5, 5, 101)
    for theta in (0.0, 0.7, np.pi / 2):
        pdf = marginal_pdf(basis_state(0, 10), theta, qs)
        assert np.allclose(pdf, norm.pdf(qs), atol=1e-12)


def test_marginal_single_photon():
    qs = np.linspace(-5, 5, 101)
    pdf = marginal_pdf(basis_state(1, 10), 0.3, qs)
    assert np.allclose(pdf, qs**2 * norm.pdf(qs), atol=1e-12)


def test_marginal_coherent_mean_tracks_phase():
    # phase convention <q_theta|n> = e^{i n theta} psi_n gives mean 2 Re(alpha e^{i theta})
    alpha = 0.5 + 0.4j
    qs = np.linspace(-6, 6, 2401)
    for theta in (0.0, 0.9, 2.1):
        pdf = marginal_pdf(coherent(alpha, 30), theta, qs)
        mean = 2 * np.real(alpha * np.exp(1j * theta))
        assert np.allclose(pdf, norm.pdf(qs, loc=mean), atol=1e-10)


def test_marginal_squeezed_vacuum_variances():
    sv = squeezed_vacuum(3.0, 60)
    qs = np.linspace(-8, 8, 3201)
    var_p = np.trapezoid(qs**2 * marginal_pdf(sv, np.pi / 2, qs), qs)
    var_x = np.trapezoid(qs**2 * marginal_pdf(sv, 0.0, qs), qs)
    assert np.isclose(var_p, 10 ** (-0.3), atol=1e-6)
    assert np.isclose(var_x, 10 ** (0.3), atol=1e-4)


def test_marginal_normalized_for_random_states():
    qs = np.arange(-10, 10, 1e-3)
    for seed in range(4):
        rho = MixedState(random_density(12, seed=seed))
        for theta in (0.0, 1.1):
            pdf = marginal_pdf(rho, theta, qs)
            assert pdf.min() > -1e-12
            assert np.isclose(np.trapezoid(pdf, qs), 1.0, atol=1e-8)


def test_conditioning_validation():
    with pytest.raises(ValueError):
        Conditioning(delta=-0.1)
    with pytest.raises(ValueError):
        Conditioning(eta_a=1.3)


@pytest.mark.parametrize(
    "q_center,delta,eta",
    [(0.0, 0.2, 1.0), (0.0, 0.2, 0.7), (1.0, 0.4, 0.85), (-1.14, 0.2, 1.0)],
)
def test_window_success_matches_gaussian_oracle(q_center, delta, eta):
    # Alice's reduced state is (1 - w eta)|0><0| + w eta |1><1|, so the
    # window probability follows from normal-distribution integrals
    w = 0.5
    res = hybrid_entangled(ResourceParams(weight_dv=w), dim_b=40)
    prep = condition(res, Conditioning(q_center=q_center, delta=delta, eta_a=eta))
    a, b = q_center - delta / 2, q_center + delta / 2
    i0 = norm.cdf(b) - norm.cdf(a)
    i2 = i0 - (b * norm.pdf(b) - a * norm.pdf(a))
    expected = (1 - w * eta) * i0 + w * eta * i2
    assert np.isclose(prep.success_prob, expected, atol=1e-12)
    assert not prep.success_is_density


def test_window_success_matches_marginal_integral():
    # joint-picture success equals the window integral of Alice's marginal
    from scipy.special import roots_legendre

    res = hybrid_entangled(ResourceParams(weight_dv=0.35), dim_b=30)
    c = Conditioning(theta_rad=0.4, q_center=0.6, delta=0.3, eta_a=0.8)
    prep = condition(res, c)
    ra = partial_trace(loss_on_mode_a(res, c.eta_a), keep="a")
    x, wts = roots_legendre(40)
    nodes = c.q_center + (c.delta / 2) * x
    integral = np.sum((c.delta / 2) * wts * marginal_pdf(ra, c.theta_rad, nodes))
    assert np.isclose(prep.success_prob, integral, atol=1e-10)


def test_point_conditioning_reports_density():
    res = hybrid_entangled(ResourceParams(), dim_b=30)
    c = Conditioning(q_center=0.3, delta=0.0)
    prep = condition(res, c)
    assert prep.success_is_density
    ra = partial_trace(res, keep="a")
    assert np.isclose(prep.success_prob, marginal_pdf(ra, 0.0, 0.3)[0], atol=1e-12)


def test_condition_rejects_empty_window():
    res = hybrid_entangled(ResourceParams(), dim_b=30)
    with pytest.raises(ValueError):
        condition(res, Conditioning(q_center=60.0, delta=0.0))


def test_closed_form_limits():
    cvm, cvp = cv_pair(ResourceParams(model="ideal"), 30)
    assert fidelity(closed_form_state(0.0, 0.0, cvm, cvp), cvm) > 1 - 1e-12
    assert fidelity(closed_form_state(1e6, 0.0, cvm, cvp), cvp) > 1 - 1e-6


def test_point_conditioning_matches_closed_form():
    params = ResourceParams(model="ideal")
    res = hybrid_entangled(params, dim_b=30)
    cvm, cvp = cv_pair(params, 30)
    for q, theta in [(0.9, 0.0), (-1.7, np.pi / 4), (2.4, np.pi)]:
        prep = condition(res, Conditioning(theta_rad=theta, q_center=q, delta=0.0))
        assert fidelity(prep.rho, closed_form_state(q, theta, cvm, cvp)) > 1 - 1e-9


def test_phase_covariance_of_fidelity():
    params = ResourceParams()
    res = hybrid_entangled(params, dim_b=30)
    cvm, cvp = cv_pair(params, 30)
    q = 1.2
    vals = []
    for theta in (0.0, np.pi / 3, np.pi / 2, 4.0):
        prep = condition(res, Conditioning(theta_rad=theta, q_center=q, delta=0.0))
        vals.append(fidelity(prep.rho, closed_form_state(q, theta, cvm, cvp)))
    assert np.ptp(vals) < 1e-9


def test_sign_flip_equals_phase_shift():
    res = hybrid_entangled(ResourceParams(model="ideal"), dim_b=30)
    for q, theta in [(1.3, 0.0), (0.6, np.pi / 4)]:
        a = condition(res, Conditioning(theta_rad=theta, q_center=-q, delta=0.0)).rho
        b = condition(res, Conditioning(theta_rad=theta + np.pi, q_center=q, delta=0.0)).rho
        overlap = np.trace(a.mat @ b.mat).real  # both pure
        assert overlap > 1 - 1e-9


def test_loss_before_projection_degrades_fidelity():
    res = hybrid_entangled(ResourceParams(), dim_b=40)
    tgt = cat(0.7, "odd", 40)
    f_clean = fidelity(condition(res, Conditioning(q_center=0.0, delta=0.0)).rho, tgt)
    f_lossy = fidelity(
        condition(res, Conditioning(q_center=0.0, delta=0.0, eta_a=0.7)).rho, tgt
    )
    assert f_lossy < f_clean


def test_tail_conditioning_success_oracle():
    w = 0.5
    res = hybrid_entangled(ResourceParams(weight_dv=w), dim_b=40)
    prep = condition_tail(res, 0.0, 2.0)
    i0 = 2 * norm.cdf(-2.0)
    i2 = i0 + 2 * 2.0 * norm.pdf(2.0)
    expected = (1 - w) * i0 + w * i2
    assert np.isclose(prep.success_prob, expected, atol=1e-10)
    # frozen from this oracle at dim 40
    assert np.isclose(prep.success_prob, 0.1534821969227534, atol=1e-10)
    assert np.isclose(fidelity(prep.rho, cat(0.7, "even", 40)), 0.8422758830922087, atol=1e-8)


def test_tail_conditioning_validation():
    res = hybrid_entangled(ResourceParams(), dim_b=20)
    with pytest.raises(ValueError):
        condition_tail(res, 0.0, -1.0)
    with pytest.raises(ValueError):
        condition_tail(res, 0.0, 12.0, q_max=10.0)


def test_conditioned_state_is_physical():
    res = hybrid_entangled(ResourceParams(), dim_b=30)
    prep = condition(res, Conditioning(q_center=0.8, delta=0.25, eta_a=0.9))
    rho = prep.rho.mat
    assert np.allclose(rho, rho.conj().T, atol=1e-12)
    assert np.isclose(np.trace(rho).real, 1.0, atol=1e-12)
    assert np.linalg.eigvalsh(rho).min() > -1e-10


def test_loss_commutes_to_reduced_picture():
    # conditioning after loss on A equals conditioning the lossy joint state
    res = hybrid_entangled(ResourceParams(), dim_b=25)
    lossy = loss_on_mode_a(res, 0.6)
    direct = condition(res, Conditioning(q_center=0.5, delta=0.2, eta_a=0.6))
    explicit = condition(lossy, Conditioning(q_center=0.5, delta=0.2, eta_a=1.0))
    assert np.allclose(direct.rho.mat, explicit.rho.mat, atol=1e-12)
    assert np.isclose(direct.success_prob, explicit.success_prob, atol=1e-14)
