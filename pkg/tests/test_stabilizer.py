import numpy as np
import pytest

from agqec.agcode import LinearCode, build_one_point_code
from agqec.curve import CurveSpec
from agqec.gf import build_field
from agqec.stabilizer import (
    ConstructionError,
    StabilizerCode,
    distance_lower_bound,
    load_stabilizer,
    pauli_weight,
    save_stabilizer,
    single_qudit_pauli,
    symplectic_product,
)


@pytest.fixture(scope="module")
def f9():
    return build_field(3, 2)


@pytest.fixture(scope="module")
def c3():
    return CurveSpec(3, 4)


@pytest.fixture(scope="module")
def flagship(c3, f9):
    return StabilizerCode.from_hermitian_code(build_one_point_code(c3, f9, 7))


@pytest.fixture(scope="module")
def toy(c3, f9):
    return StabilizerCode.from_hermitian_code(build_one_point_code(c3, f9, 0))


def test_symplectic_product_examples():
    x0 = single_qudit_pauli(4, 0, 1, 0)
    z0 = single_qudit_pauli(4, 0, 0, 1)
    x0_sq = single_qudit_pauli(4, 0, 2, 0)
    assert symplectic_product(3, x0, z0) == 1
    assert symplectic_product(3, z0, x0) == 2  # antisymmetric mod 3
    assert symplectic_product(3, x0, x0) == 0
    assert symplectic_product(3, x0, x0_sq) == 0
    with pytest.raises(ValueError):
        symplectic_product(3, x0, single_qudit_pauli(5, 0, 1, 0))


def test_pauli_weight():
    v = np.zeros(10, dtype=np.int64)
    v[1] = 2
    v[5 + 1] = 1
    v[3] = 1
    assert pauli_weight(v) == 2


def test_flagship_construction(flagship, c3, f9):
    code = build_one_point_code(c3, f9, 7)
    assert (flagship.n, flagship.k, flagship.q) == (27, 27 - 2 * code.k, 3)
    assert flagship.checks.shape == (10, 54)
    hx, hz = flagship.checks[:, :27], flagship.checks[:, 27:]
    assert not np.any((hx @ hz.T - hz @ hx.T) % 3)
    flagship.validate()


def test_all_so_degrees_expand(c3, f9):
    for s in range(8):
        code = build_one_point_code(c3, f9, s)
        stab = StabilizerCode.from_hermitian_code(code)
        assert stab.k == 27 - 2 * code.k


def test_non_so_input_rejected(c3, f9):
    with pytest.raises(ValueError):
        StabilizerCode.from_hermitian_code(build_one_point_code(c3, f9, 9))


def test_degenerate_empty_code(f9):
    empty = LinearCode(field=f9, n=6, k=0, gen=np.zeros((0, 6), dtype=np.int64))
    stab = StabilizerCode.from_hermitian_code(empty)
    assert (stab.n, stab.k) == (6, 6)
    assert stab.checks.shape == (0, 12)
    assert stab.logicals.shape == (12, 12)


def test_toy_constants_code(toy):
    # the all-ones row and its beta multiple expand to one X-type and one
    # Z-type all-ones check
    assert (toy.n, toy.k) == (27, 25)
    assert toy.checks.shape == (2, 54)
    assert np.array_equal(toy.checks[0], np.r_[np.ones(27, dtype=np.int64), np.zeros(27, dtype=np.int64)])
    assert np.array_equal(toy.checks[1], np.r_[np.zeros(27, dtype=np.int64), np.ones(27, dtype=np.int64)])


def test_syndrome_basics(flagship):
    assert not np.any(flagship.syndrome(np.zeros(54, dtype=np.int64)))
    for row in flagship.checks:
        assert not np.any(flagship.syndrome(row))
    e = single_qudit_pauli(27, 0, 1, 0)
    # X on qudit 0 triggers minus the first Z-part column
    assert np.array_equal(flagship.syndrome(e), (-flagship.checks[:, 27]) % 3)


def test_syndrome_linearity(flagship):
    rng = np.random.default_rng(0)
    for _ in range(200):
        e1 = rng.integers(0, 3, size=54)
        e2 = rng.integers(0, 3, size=54)
        lhs = flagship.syndrome((e1 + e2) % 3)
        rhs = (flagship.syndrome(e1) + flagship.syndrome(e2)) % 3
        assert np.array_equal(lhs, rhs)


def test_classify(flagship):
    assert flagship.classify(np.zeros(54, dtype=np.int64)) == "identity"
    two_checks = (flagship.checks[0] + flagship.checks[3]) % 3
    assert flagship.classify(two_checks) == "stabilizer"
    for row in flagship.logicals[:4]:
        assert flagship.classify(row) == "logical"
    assert flagship.classify(single_qudit_pauli(27, 5, 2, 0)) == "unresolved"


def test_classify_invariant_under_stabilizer_shift(flagship):
    rng = np.random.default_rng(1)
    reps = {
        "identity": np.zeros(54, dtype=np.int64),
        "stabilizer": flagship.checks[2],
        "logical": flagship.logicals[0],
        "unresolved": single_qudit_pauli(27, 3, 1, 2),
    }
    for want, r in reps.items():
        base = flagship.classify(r)
        assert base == want or (want == "identity" and base == "identity")
        for _ in range(5):
            coeffs = rng.integers(0, 3, size=flagship.checks.shape[0])
            shifted = (r + coeffs @ flagship.checks) % 3
            got = flagship.classify(shifted)
            if want == "identity":
                assert got in ("identity", "stabilizer")
            else:
                assert got == want


def test_logical_pairing(flagship):
    L = flagship.logicals
    for i in range(L.shape[0]):
        for j in range(L.shape[0]):
            got = symplectic_product(3, L[i], L[j])
            if i % 2 == 0 and j == i + 1:
                assert got == 1
            elif j % 2 == 0 and i == j + 1:
                assert got == 2
            else:
                assert got == 0


def test_commutation_enforced():
    # X0 and Z0 anticommute: construction must refuse
    bad = np.zeros((2, 4), dtype=np.int64)
    bad[0, 0] = 1
    bad[1, 2] = 1
    with pytest.raises(ConstructionError):
        StabilizerCode(3, bad)


def test_distance_bounds(flagship, toy):
    assert distance_lower_bound(flagship, 0).verified_min_weight_logical is None
    b = distance_lower_bound(toy, 2)
    assert b.verified_min_weight_logical == 2
    assert toy.classify(b.example) == "logical"
    b7 = distance_lower_bound(flagship, 2)
    assert b7.verified_min_weight_logical is None  # distance exceeds 2
    with pytest.raises(ValueError):
        distance_lower_bound(flagship, 5, budget=1000)


def test_stabilizer_file_round_trip(tmp_path, flagship):
    path = tmp_path / "code.stab.json"
    save_stabilizer(flagship, path)
    loaded = load_stabilizer(path)
    assert (loaded.n, loaded.k, loaded.q) == (flagship.n, flagship.k, flagship.q)
    assert np.array_equal(loaded.checks, flagship.checks)
    assert np.array_equal(loaded.logicals, flagship.logicals)


def test_loader_rejects_tampered_file(tmp_path, flagship):
    import json

    path = tmp_path / "code.stab.json"
    save_stabilizer(flagship, path)
    doc = json.loads(path.read_text())
    doc["checks"][0][27] = (doc["checks"][0][27] + 1) % 3  # break commutation
    path.write_text(json.dumps(doc))
    with pytest.raises(ConstructionError):
        load_stabilizer(path)
