import numpy as np
import pytest

from confgauss import lorentz as lz


def test_product_signature_examples():
    assert lz.lorentz_product(lz.V_L, lz.V_L) == 0.0
    assert lz.lorentz_product(lz.V_T, lz.V_T) == -1.0
    v = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    assert lz.lorentz_product(v, v) == 5.0


def test_product_symmetric_bilinear(rng):
    for _ in range(50):
        u, v, w = rng.normal(size=(3, 5))
        a, b = rng.normal(size=2)
        assert lz.lorentz_product(u, v) == pytest.approx(lz.lorentz_product(v, u))
        lhs = lz.lorentz_product(a * u + b * w, v)
        rhs = a * lz.lorentz_product(u, v) + b * lz.lorentz_product(w, v)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_classify_vector_distinguished():
    assert lz.classify_vector(lz.V_S) == "spacelike"
    assert lz.classify_vector(lz.V_L) == "lightlike"
    assert lz.classify_vector(lz.V_T) == "timelike"


def test_classify_vector_zero_errors():
    with pytest.raises(ValueError, match="degenerate"):
        lz.classify_vector(np.zeros(5))


def test_generator_trivial_cases():
    assert np.allclose(lz.dilation_matrix(0.0), np.eye(5))
    assert np.allclose(lz.translation_matrix([0.0, 0.0, 0.0]), np.eye(5))
    assert np.array_equal(lz.inversion_matrix(),
                          np.diag([-1.0, -1.0, -1.0, 1.0, -1.0]))


def test_generators_are_so41():
    mats = [
        lz.dilation_matrix(0.7),
        lz.rotation_matrix(lz.axis_angle_matrix([0, 0, 1], 0.9)),
        lz.inversion_matrix(),
        lz.translation_matrix([1.0, 2.0, 3.0]),
    ]
    eps = lz.EPSILON
    for m in mats:
        assert np.max(np.abs(m.T @ eps @ m - eps)) <= 1e-12
        assert lz.is_so41(m)


def test_rotation_rejects_bad_theta():
    with pytest.raises(ValueError, match="orthogonal"):
        lz.rotation_matrix(np.diag([2.0, 1.0, 1.0]))
    with pytest.raises(ValueError, match="orientation"):
        lz.rotation_matrix(np.diag([-1.0, 1.0, 1.0]))


def test_is_so41_counterexample():
    assert lz.is_so41(np.eye(5))
    assert not lz.is_so41(np.diag([2.0, 1.0, 1.0, 1.0, 1.0]))


def test_act_on_r3_examples():
    x = np.array([0.3, -0.4, 0.9])
    assert np.allclose(lz.act_on_r3(np.eye(5), x), x)
    assert np.allclose(lz.act_on_r3(lz.translation_matrix([1, 2, 3]), x),
                       x + np.array([1, 2, 3]))
    assert np.allclose(lz.act_on_r3(lz.inversion_matrix(), [2.0, 0.0, 0.0]),
                       [0.5, 0.0, 0.0])


def test_act_on_r3_infinity_routing():
    m_tra = lz.translation_matrix([1.0, 0.0, 0.0])
    assert lz.act_on_r3(m_tra, lz.INFINITY) is lz.INFINITY
    # the inversion swaps 0 and infinity
    assert lz.act_on_r3(lz.inversion_matrix(), [0.0, 0.0, 0.0]) is lz.INFINITY
    assert np.allclose(lz.act_on_r3(lz.inversion_matrix(), lz.INFINITY),
                       [0.0, 0.0, 0.0])


def test_act_on_r3_requires_so41():
    with pytest.raises(ValueError, match="SO\\(4,1\\)"):
        lz.act_on_r3(np.diag([2.0, 1.0, 1.0, 1.0, 1.0]), [1.0, 0.0, 0.0])


def test_act_on_s3_examples():
    x = np.array([0.5, 0.5, 0.5, 0.5])
    assert np.allclose(lz.act_on_s3(np.eye(5), x), x)
    theta = lz.axis_angle_matrix([0.0, 0.0, 1.0], 1.1)
    out = lz.act_on_s3(lz.rotation_matrix(theta), x)
    assert np.allclose(out[:3], theta @ x[:3])
    assert out[3] == pytest.approx(x[3])
    north = np.array([0.0, 0.0, 0.0, 1.0])
    assert np.allclose(lz.act_on_s3(lz.dilation_matrix(0.8), north), north)


def test_act_on_s3_rejects_non_unit():
    with pytest.raises(ValueError, match="S\\^3"):
        lz.act_on_s3(np.eye(5), [1.0, 1.0, 0.0, 0.0])


def test_morphism_property(rng):
    for _ in range(20):
        m1 = lz.word_matrix(lz.random_word(rng))
        m2 = lz.word_matrix(lz.random_word(rng))
        x = rng.uniform(-0.8, 0.8, size=3)
        lhs = lz.act_on_r3(m1 @ m2, x, so41_tol=1e-8)
        rhs = lz.act_on_r3(m1, lz.act_on_r3(m2, x, so41_tol=1e-8), so41_tol=1e-8)
        if lhs is lz.INFINITY or rhs is lz.INFINITY:
            assert lhs is rhs
        else:
            assert np.max(np.abs(lhs - rhs)) <= 1e-9


def test_projection_compatibility(rng):
    # pi(M.X) = M.(pi(X)) through the isomorphism
    from confgauss.models import stereo, stereo_inv

    for _ in range(20):
        m = lz.word_matrix(lz.random_word(rng))
        x = rng.uniform(-0.8, 0.8, size=3)
        big_x = stereo_inv(x)
        lhs = stereo(lz.act_on_s3(m, big_x, tol=1e-8))
        rhs = lz.act_on_r3(m, x, so41_tol=1e-8)
        if lhs is lz.INFINITY or rhs is lz.INFINITY:
            assert lhs is rhs
        else:
            assert np.max(np.abs(lhs - rhs)) <= 1e-9


def test_type_preservation_under_words(rng):
    for _ in range(30):
        m = lz.word_matrix(lz.random_word(rng))
        v = rng.normal(size=5)
        # stay away from the light cone so the type is stable
        if abs(lz.lorentz_product(v, v)) < 0.1 * np.dot(v, v):
            continue
        assert lz.classify_vector(m @ v) == lz.classify_vector(v)


def test_random_words_in_so41(rng):
    for _ in range(30):
        assert lz.is_so41(lz.word_matrix(lz.random_word(rng)), tol=1e-10)


def test_parse_word():
    word = lz.parse_word("dil:0.5 rot:z,1.2 inv tra:1,0,0")
    assert [g.kind for g in word] == ["dil", "rot", "inv", "tra"]
    assert word[0].param == (0.5,)
    assert word[1].param == (0.0, 0.0, 1.0, 1.2)
    assert word[3].param == (1.0, 0.0, 0.0)
    assert lz.parse_word("") == []
    with pytest.raises(ValueError):
        lz.parse_word("boost:1")
    with pytest.raises(ValueError):
        lz.parse_word("tra:1,2")


def test_word_matrix_composes_left_to_right():
    word = lz.parse_word("dil:0.5 tra:1,0,0")
    m = lz.word_matrix(word)
    x = np.array([0.2, 0.0, 0.0])
    expected = np.exp(0.5) * x + np.array([1.0, 0.0, 0.0])
    assert np.allclose(lz.act_on_r3(m, x), expected)
