"""Unit tests for the symbol front-end."""

import math
from unittest.mock import Mock, patch

import numpy as np
import pytest

from qsc_ldpc.exceptions import ParameterDomainError
from qsc_ldpc.models.channel import ChannelParams, QscStarParams
from qsc_ldpc.services.frontend import (
    FrozenFrontEnd,
    QscFrontEnd,
    QscStarFrontEnd,
    app_llr_direct,
    brute_force_llr,
    brute_force_llr_qsc_star,
    brute_force_marginal,
    brute_force_marginal_qsc_star,
    channel_term,
    exclusion_products,
    extrinsic_agreement,
    front_end_state,
    init_llr,
    refresh,
    refresh_qsc_star,
)
from tests.utils.factories import QscStarParamsFactory, random_llrs, random_symbols


@pytest.mark.unit
@pytest.mark.frontend
class TestHelpers:
    """Agreement probabilities and exclusion products."""

    def test_exclusion_products(self):
        """Each entry is the product of the others."""
        values = np.array([[2.0, 3.0, 5.0, 7.0], [1.0, 0.0, 4.0, 0.5]])
        expected = np.array([[105.0, 70.0, 42.0, 30.0], [0.0, 2.0, 0.0, 0.0]])
        assert np.allclose(exclusion_products(values), expected)

    def test_exclusion_products_single_bit(self):
        """With one entry the empty product is one."""
        assert exclusion_products(np.array([[0.3]])).tolist() == [[1.0]]

    def test_agreement_is_clamped(self):
        """Saturated LLRs never give probabilities of exactly 0 or 1."""
        p = extrinsic_agreement([0, 1], [800.0, 800.0])
        assert 0.0 < p[1] < p[0] < 1.0

    def test_agreement_follows_received_bit(self):
        """A positive LLR supports bit 0, so it agrees with y=0."""
        p = extrinsic_agreement([0, 1], [1.0, 1.0])
        assert p[0] == pytest.approx(1.0 / (1.0 + math.exp(-1.0)))
        assert p[1] == pytest.approx(1.0 - p[0])


@pytest.mark.unit
@pytest.mark.frontend
class TestInitLlr:
    """First-iteration channel LLRs."""

    def test_reference_value(self):
        """m=3, eps=0.25 gives eps_BSC = 1/7 and LLR log 6."""
        assert init_llr(ChannelParams(m=3, epsilon=0.25)) == pytest.approx(math.log(6.0))

    def test_flat_prior_refresh_equals_init(self):
        """Without extrinsic information every bit gets +-init_llr."""
        p = ChannelParams(m=3, epsilon=0.25)
        y = np.array([[0, 1, 1]], dtype=np.uint8)
        l_ch = refresh(y, np.zeros((1, 3)), p)
        assert l_ch == pytest.approx(np.array([[1.0, -1.0, -1.0]]) * math.log(6.0))

    def test_flat_prior_posterior(self):
        """P(x_i = y_i | y) is 1 - 1/7 for m=3, eps=0.25."""
        p = ChannelParams(m=3, epsilon=0.25)
        y = np.array([[1, 0, 1]], dtype=np.uint8)
        marginal = brute_force_marginal(y, np.full((1, 3), 0.5), p)
        assert marginal == pytest.approx(np.full((1, 3), 1.0 - 1.0 / 7.0), abs=1e-12)

    @pytest.mark.parametrize(
        ("m", "eps"), [(2, 0.0), (1, 1.0), (3, 2.0 * (1 - 2.0**-3))]
    )
    def test_domain(self, m, eps):
        """Noiseless and uninformative channels have no finite LLR."""
        with pytest.raises(ParameterDomainError):
            init_llr(ChannelParams.model_construct(m=m, epsilon=eps))


@pytest.mark.unit
@pytest.mark.frontend
class TestQscRefresh:
    """Message-form and direct-form refresh against enumeration."""

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
    @pytest.mark.parametrize("eps", [0.05, 0.25, 0.4])
    def test_matches_enumeration(self, m, eps):
        """refresh + extrinsic equals the brute-force a-posteriori LLR."""
        p = ChannelParams(m=m, epsilon=eps)
        y = random_symbols(500, m, seed=m)
        extr = random_llrs(500, m, seed=100 + m, scale=2.0)
        brute = brute_force_llr(y, extrinsic_agreement(y, extr), p)
        assert np.max(np.abs(refresh(y, extr, p) + extr - brute)) < 1e-10
        assert np.max(np.abs(app_llr_direct(y, extr, p) - brute)) < 1e-10

    def test_single_symbol_shape(self):
        """A lone symbol of shape (m,) works too."""
        p = ChannelParams(m=2, epsilon=0.1)
        out = refresh(np.array([0, 1], dtype=np.uint8), np.array([0.5, -0.5]), p)
        assert out.shape == (2,)

    def test_state_keeps_intermediates(self, qsc_params):
        """beta is the full agreement product."""
        y = random_symbols(10, 4, seed=7)
        extr = random_llrs(10, 4, seed=8)
        state = front_end_state(y, extr, qsc_params)
        assert state.beta == pytest.approx(np.prod(state.p, axis=1))
        assert np.all((state.eps_out > 0.0) & (state.eps_out < 1.0))

    def test_noiseless_channel_saturates(self):
        """eps=0 pins every bit to the received value at the clip."""
        p = ChannelParams(m=2, epsilon=0.0)
        y = np.array([[0, 1]], dtype=np.uint8)
        assert refresh(y, np.zeros((1, 2)), p).tolist() == [[30.0, -30.0]]

    def test_clip_from_settings(self):
        """The clip defaults to the configured value."""
        p = ChannelParams(m=2, epsilon=0.0)
        with patch("qsc_ldpc.services.frontend.settings") as mock_settings:
            mock_settings.return_value = Mock(llr_clip=12.5)
            out = refresh(np.array([[0, 0]], dtype=np.uint8), np.zeros((1, 2)), p)
        assert out.tolist() == [[12.5, 12.5]]

    def test_enumeration_limit(self):
        """Brute force refuses very wide symbols."""
        p = ChannelParams(m=13, epsilon=0.1)
        with pytest.raises(ParameterDomainError):
            brute_force_llr(np.zeros((1, 13)), np.full((1, 13), 0.5), p)


@pytest.mark.unit
@pytest.mark.frontend
class TestQscInvariants:
    """Symmetry, erasure and cost properties of the q-SC rules."""

    @pytest.mark.parametrize("m", [1, 3, 6])
    def test_xor_mask_flips_only_masked_outputs(self, m):
        """Flipping y_i and the sign of l_a,i flips exactly output i."""
        p = ChannelParams(m=m, epsilon=0.25)
        y = random_symbols(200, m, seed=31)
        mask = random_symbols(200, m, seed=32)
        extr = random_llrs(200, m, seed=33, scale=4.0)
        base = refresh(y, extr, p)
        moved = refresh(y ^ mask, (1.0 - 2.0 * mask) * extr, p)
        assert np.array_equal(moved, (1.0 - 2.0 * mask) * base)

    def test_zero_beta_is_an_erasure(self):
        """beta_[i] = 0 gives eps_i = 1/2 and a channel LLR of exactly 0."""
        p = ChannelParams(m=4, epsilon=0.25)
        assert channel_term(np.zeros(3), p, 30.0).tolist() == [0.0, 0.0, 0.0]
        y = np.array([[0, 0, 1, 1]], dtype=np.uint8)
        # bit 0 is certainly flipped, so every other bit is erased
        extr = np.array([[-800.0, 2.0, -1.0, 0.5]])
        state = front_end_state(y, extr, p)
        assert np.all(np.abs(state.l_ch[0, 1:]) < 1e-9)
        assert state.eps_out[0, 1:] == pytest.approx(np.full(3, 0.5), abs=1e-10)

    def test_erasure_monotonicity(self):
        """The channel term grows strictly with beta_[i]."""
        p = ChannelParams(m=4, epsilon=0.25)
        term = channel_term(np.linspace(0.0, 1.0, 200), p, 30.0)
        assert np.all(np.diff(term) > 0.0)

    def test_exclusion_matches_division(self, qsc_params):
        """beta_[i] * p_i = beta where no p_i vanishes."""
        y = random_symbols(50, 4, seed=34)
        state = front_end_state(y, random_llrs(50, 4, seed=35), qsc_params)
        rebuilt = state.beta_excl * state.p
        assert rebuilt == pytest.approx(np.repeat(state.beta[:, None], 4, axis=1), abs=1e-12)

    def test_wide_symbols_never_enumerate(self):
        """m=20 uses one exclusion product pass and no 2^m table."""
        p = ChannelParams(m=20, epsilon=0.3)
        y = random_symbols(64, 20, seed=36)
        extr = random_llrs(64, 20, seed=37)
        with (
            patch(
                "qsc_ldpc.services.frontend.symbols_from_indices",
                side_effect=AssertionError("enumerated"),
            ),
            patch(
                "qsc_ldpc.services.frontend.exclusion_products",
                wraps=exclusion_products,
            ) as spy,
        ):
            out = refresh(y, extr, p)
        assert out.shape == (64, 20)
        assert spy.call_count == 1
        assert spy.call_args.args[0].shape == (64, 20)

    @pytest.mark.slow
    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
    @pytest.mark.parametrize("eps", [0.05, 0.25, 0.4])
    def test_ten_thousand_oracle_cases(self, m, eps):
        """Message form, direct form and enumeration agree on 10^4 symbols."""
        p = ChannelParams(m=m, epsilon=eps)
        y = random_symbols(10_000, m, seed=40 + m)
        extr = random_llrs(10_000, m, seed=50 + m, scale=3.0)
        brute = brute_force_llr(y, extrinsic_agreement(y, extr), p)
        assert np.max(np.abs(refresh(y, extr, p) + extr - brute)) < 1e-10
        assert np.max(np.abs(app_llr_direct(y, extr, p) - brute)) < 1e-10


@pytest.mark.unit
@pytest.mark.frontend
class TestQscStarRefresh:
    """q-SC* front-end."""

    @pytest.mark.parametrize("m", [1, 3, 5])
    @pytest.mark.parametrize("eps", [0.05, 0.25, 0.4])
    def test_reduces_to_qsc(self, m, eps):
        """Flat conditional probabilities reproduce the q-SC refresh."""
        y = random_symbols(300, m, seed=m)
        extr = random_llrs(300, m, seed=m + 1, scale=3.0)
        star = refresh_qsc_star(y, extr, QscStarParams.from_qsc(m, eps))
        plain = refresh(y, extr, ChannelParams(m=m, epsilon=eps))
        assert np.max(np.abs(star - plain)) < 1e-9

    def test_matches_enumeration(self):
        """refresh_qsc_star + extrinsic equals the brute-force LLR."""
        p = QscStarParamsFactory.create()
        y = random_symbols(400, p.m, seed=11)
        extr = random_llrs(400, p.m, seed=12)
        brute = brute_force_llr_qsc_star(y, extrinsic_agreement(y, extr), p)
        assert np.max(np.abs(refresh_qsc_star(y, extr, p) + extr - brute)) < 1e-9

    def test_brute_force_marginal_flat_conditionals(self):
        """With eps_cond = 1/2 the q-SC* enumeration is the q-SC one."""
        y = random_symbols(100, 3, seed=14)
        probs = extrinsic_agreement(y, random_llrs(100, 3, seed=15))
        star = brute_force_marginal_qsc_star(y, probs, QscStarParams.from_qsc(3, 0.3))
        plain = brute_force_marginal(y, probs, ChannelParams(m=3, epsilon=0.3))
        assert np.max(np.abs(star - plain)) < 1e-12

    def test_brute_force_marginal_flat_prior(self):
        """Without extrinsic information P(x_i = y_i) = 1 - alpha * eps_cond[i]."""
        p = QscStarParamsFactory.create()
        y = random_symbols(5, p.m, seed=16)
        marginal = brute_force_marginal_qsc_star(y, np.full((5, p.m), 0.5), p)
        expected = 1.0 - np.asarray(p.marginal_eps)
        assert np.max(np.abs(marginal - expected)) < 1e-12

    def test_flat_prior_gives_marginal_bsc(self):
        """Without extrinsic information bit i sees BSC(alpha * eps_cond[i])."""
        p = QscStarParamsFactory.create(eps_cond=(0.3, 0.6, 0.8))
        y = random_symbols(20, 3, seed=13)
        out = refresh_qsc_star(y, np.zeros((20, 3)), p)
        marginal = np.asarray(p.marginal_eps)
        expected = (1.0 - 2.0 * y) * np.log((1.0 - marginal) / marginal)
        assert np.max(np.abs(out - expected)) < 1e-12


@pytest.mark.unit
@pytest.mark.frontend
class TestFrontEndClasses:
    """Decoder-facing front-end objects."""

    def test_flat_arrays(self, qsc_params):
        """initial_llr and refresh work on N-bit vectors."""
        fe = QscFrontEnd(qsc_params)
        y = random_symbols(5, 4, seed=3).reshape(-1)
        first = fe.initial_llr(y)
        assert first.shape == (20,)
        assert np.allclose(np.abs(first), init_llr(qsc_params))

    def test_frozen_ignores_extrinsic(self, qsc_params):
        """The baseline keeps its first LLRs."""
        frozen = FrozenFrontEnd(QscFrontEnd(qsc_params))
        y = random_symbols(5, 4, seed=4).reshape(-1)
        extr = random_llrs(5, 4, seed=5).reshape(-1)
        assert np.array_equal(frozen.refresh(y, extr), frozen.initial_llr(y))
        assert frozen.m == 4

    def test_qsc_star_front_end(self):
        """QscStarFrontEnd delegates to refresh_qsc_star."""
        p = QscStarParamsFactory.create()
        y = random_symbols(4, 3, seed=6)
        extr = random_llrs(4, 3, seed=7)
        fe = QscStarFrontEnd(p, clip=25.0)
        assert np.allclose(
            fe.refresh(y.reshape(-1), extr.reshape(-1)),
            refresh_qsc_star(y, extr, p, clip=25.0).reshape(-1),
        )
