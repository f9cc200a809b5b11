import random
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import EchelonLattice, count_homs_finite, tensor_bruteforce
from zhomalg.batteries import cyclic_extension, multiplication_ses, random_group, random_hom, scramble
from zhomalg.errors import IllDefinedHomError, InputError, LiteralError
from zhomalg.fgab import (
    FgAbGroup,
    GroupHom,
    ShortExactSeq,
    canonical_decomposition,
    cokernel,
    coequalizer,
    direct_sum,
    dual,
    dual_hom,
    equalizer,
    hom_from_json,
    hom_group,
    hom_tensor_adjunction_check,
    hom_to_json,
    image,
    is_exact_at,
    is_pure,
    is_split,
    kernel,
    parse_group,
    pullback,
    pushout,
    tensor,
)
from zhomalg.intlin import IntMatrix

F = FgAbGroup.from_invariant_factors
Z = FgAbGroup.free(1)


def cyc(n):
    return FgAbGroup.cyclic(n)


def hom(src, tgt, rows):
    return GroupHom(src, tgt, IntMatrix.from_rows(rows, src.ngens))


def canon(G):
    c = G.canonical
    return (list(c.factors), c.free_rank)


def small_factor_lists():
    return st.lists(st.integers(2, 8), max_size=2)


# construction and classification ---------------------------------------------


def test_from_invariant_factors_examples():
    assert canon(F([4])) == ([4], 0)
    assert canon(F([], 1)) == ([], 1)
    assert canon(F([2, 3])) == ([6], 0)


def test_from_invariant_factors_rejects_nonpositive():
    with pytest.raises(InputError):
        F([0])
    with pytest.raises(InputError):
        F([], -1)


def test_canonical_decomposition_examples():
    assert canonical_decomposition(FgAbGroup(IntMatrix.from_rows([[2, 0], [0, 3]]))) == ([6], 0)
    assert canonical_decomposition(FgAbGroup(IntMatrix.zeros(2, 0))) == ([], 2)
    assert canonical_decomposition(FgAbGroup(IntMatrix.from_rows([[1]]))) == ([], 0)


def test_canonical_group_has_no_killed_generators():
    G = FgAbGroup(IntMatrix.from_rows([[1]]))
    assert G.simplification.group.ngens == 0


def test_order_of_random_presentations_matches_lattice_index():
    rng = random.Random(5)
    for _ in range(40):
        G = random_group(rng, max_factor=12, max_free=0)
        lat = EchelonLattice(G.ngens)
        for col in G.relations.columns():
            lat.add(col)
        assert G.order() == lat.index()


@given(small_factor_lists(), st.integers(0, 2), small_factor_lists(), st.integers(0, 2))
@settings(max_examples=80, deadline=None)
def test_direct_sum_merges_canonical_forms(a, fa, b, fb):
    G, H = F(a, fa), F(b, fb)
    S = direct_sum(G, H).group
    assert S.canonical == F(list(a) + list(b), fa + fb).canonical


def test_direct_sum_examples():
    assert canon(direct_sum(cyc(2), cyc(3)).group) == ([6], 0)
    assert direct_sum(cyc(4), FgAbGroup.zero()).group.is_isomorphic(cyc(4))
    assert canon(direct_sum(Z, Z).group) == ([], 2)


def test_direct_sum_maps_are_a_biproduct():
    G, H = F([2, 4]), F([3], 1)
    S = direct_sum(G, H)
    i0, i1 = S.injections
    p0, p1 = S.projections
    assert (p0 @ i0).equals(GroupHom.identity(G))
    assert (p1 @ i1).equals(GroupHom.identity(H))
    assert (p1 @ i0).is_zero() and (p0 @ i1).is_zero()
    assert (i0 @ p0 + i1 @ p1).equals(GroupHom.identity(S.group))


def test_elements_and_equality_by_membership():
    G = FgAbGroup(IntMatrix.from_rows([[4, 2], [0, 2]]))
    elems = list(G.elements())
    assert len(elems) == G.order() == 8
    x = G.element((6, 2))
    assert x.is_zero() and x == G.zero_element()


# homomorphisms ---------------------------------------------------------------


def test_ill_defined_hom_rejected():
    with pytest.raises(IllDefinedHomError):
        hom(cyc(4), cyc(6), [[1]])
    hom(cyc(4), cyc(6), [[3]])


def test_composition_and_arithmetic():
    f = hom(Z, Z, [[2]])
    g = hom(Z, Z, [[3]])
    assert (f @ g).matrix == IntMatrix.from_rows([[6]])
    assert (f + g).matrix == IntMatrix.from_rows([[5]])
    assert (f - f).is_zero()


def test_preimage_and_injectivity():
    f = hom(Z, cyc(6), [[2]])
    assert f.preimage((4,)) is not None
    assert f.preimage((1,)) is None
    assert not f.is_injective() and not f.is_surjective()


# Hom groups -------------------------------------------------------------------


def test_hom_examples():
    assert hom_group(cyc(5), Z).group.is_trivial
    assert hom_group(Z, F([2, 6], 1)).group.canonical == F([2, 6], 1).canonical
    assert canon(hom_group(cyc(4), cyc(6)).group) == ([2], 0)


def test_hom_order_against_image_enumeration():
    for a in [[2], [4], [2, 2], [3, 6], [6]]:
        for b in [[2], [6], [4], [2, 4], [3]]:
            assert hom_group(F(a), F(b)).group.order() == count_homs_finite(a, b)


def test_hom_order_against_enumeration_on_scrambled_presentations():
    rng = random.Random(8)
    for _ in range(15):
        a = [rng.randint(2, 6) for _ in range(rng.randint(1, 2))]
        b = [rng.randint(2, 6) for _ in range(rng.randint(1, 2))]
        G, H = scramble(F(a), rng), scramble(F(b), rng)
        Hm = hom_group(G, H)
        assert Hm.group.order() == count_homs_finite(G.canonical.factors, H.canonical.factors)
        maps = {tuple(tuple(f(g).canonical()) for g in G.generators()) for f in Hm.elements()}
        assert len(maps) == Hm.group.order()


def test_hom_round_trip():
    rng = random.Random(1)
    for _ in range(20):
        G = random_group(rng, max_factor=8, max_free=1, max_count=2)
        H = random_group(rng, max_factor=8, max_free=1, max_count=2)
        Hm = hom_group(G, H)
        f = random_hom(G, H, rng)
        assert Hm.to_hom(Hm.from_hom(f)).equals(f)


def test_dual_examples():
    assert canon(dual(FgAbGroup.free(3))) == ([], 3)
    assert dual(cyc(4)).is_trivial
    d = dual_hom(hom(Z, Z, [[2]]))
    assert abs(d.matrix[0, 0]) == 2


# tensor ------------------------------------------------------------------------


def test_tensor_examples():
    assert canon(tensor(cyc(4), cyc(6)).group) == ([2], 0)
    assert tensor(cyc(2), cyc(3)).group.is_trivial
    G = F([2, 12], 1)
    assert tensor(G, Z).group.canonical == G.canonical


def test_tensor_against_bilinear_quotient():
    for a in range(1, 7):
        for b in range(1, 7):
            order, cyclic = tensor_bruteforce(a, b)
            T = tensor(cyc(a), cyc(b)).group
            assert cyclic and T.order() == order == gcd(a, b)


def test_tensor_is_bilinear():
    T = tensor(F([4, 6]), F([6, 10]))
    rng = random.Random(4)
    for _ in range(30):
        u, u2 = [rng.randint(-9, 9) for _ in range(2)], [rng.randint(-9, 9) for _ in range(2)]
        v = [rng.randint(-9, 9) for _ in range(2)]
        s = [x + y for x, y in zip(u, u2)]
        assert T(s, v) == T(u, v) + T(u2, v)
        assert T(v, s) == T(v, u) + T(v, u2)
        assert T([0, 0], v).is_zero()
        assert T([4, 0], v) == T([0, 0], v)


@given(small_factor_lists(), st.integers(0, 1), small_factor_lists(), st.integers(0, 1))
@settings(max_examples=60, deadline=None)
def test_tensor_symmetric(a, fa, b, fb):
    G, H = F(a, fa), F(b, fb)
    assert tensor(G, H).group.canonical == tensor(H, G).group.canonical


@given(small_factor_lists(), small_factor_lists(), small_factor_lists())
@settings(max_examples=40, deadline=None)
def test_tensor_distributes_over_sums(a, b, c):
    G, H, K = F(a), F(b), F(c)
    left = tensor(G, direct_sum(H, K).group).group
    right = direct_sum(tensor(G, H).group, tensor(G, K).group).group
    assert left.canonical == right.canonical


# kernels, cokernels, limits -----------------------------------------------------


def test_kernel_examples():
    assert kernel(hom(Z, Z, [[5]])).group.is_trivial
    assert canon(kernel(GroupHom.zero(Z, FgAbGroup.zero())).group) == ([], 1)
    K = kernel(hom(cyc(4), cyc(2), [[1]]))
    assert canon(K.group) == ([2], 0)
    # enumerated: elements of Z/4 mapping to 0 in Z/2 are {0, 2}
    assert {K.inclusion(x).canonical() for x in K.group.elements()} == {(0,), (2,)}


def test_cokernel_examples():
    assert canon(cokernel(hom(Z, Z, [[5]])).group) == ([5], 0)
    assert cokernel(GroupHom.identity(F([3], 1))).group.is_trivial
    G = F([2, 4])
    assert cokernel(GroupHom.zero(FgAbGroup.zero(), G)).group.canonical == G.canonical


def test_first_isomorphism_theorem():
    rng = random.Random(9)
    for _ in range(20):
        G = random_group(rng, max_factor=10, max_free=1, max_count=2)
        H = random_group(rng, max_factor=10, max_free=1, max_count=2)
        f = random_hom(G, H, rng)
        quotient = cokernel(kernel(f).inclusion).group
        assert quotient.canonical == image(f).group.canonical


def test_pullback_examples():
    P = pullback(hom(Z, Z, [[2]]), hom(Z, Z, [[3]]))
    assert canon(P.group) == ([], 1)
    gen = P.group.generators()[0]
    assert {P.alpha(gen).coords, P.beta(gen).coords} <= {(3,), (-3,), (2,), (-2,)}
    assert abs(P.alpha(gen).coords[0]) == 3 and abs(P.beta(gen).coords[0]) == 2
    A = F([4])
    f = GroupHom.identity(A)
    assert pullback(f, f).group.is_isomorphic(A)
    O = FgAbGroup.zero()
    B = F([3], 1)
    assert pullback(GroupHom.zero(A, O), GroupHom.zero(B, O)).group.is_isomorphic(direct_sum(A, B).group)


def test_pushout_examples():
    A, B, O = F([4]), F([3], 1), FgAbGroup.zero()
    assert pushout(GroupHom.zero(O, A), GroupHom.zero(O, B)).group.is_isomorphic(direct_sum(A, B).group)
    assert pushout(GroupHom.identity(A), GroupHom.identity(A)).group.is_isomorphic(A)
    two = hom(Z, Z, [[2]])
    assert canon(pushout(two, two).group) == ([2], 1)


def _probe_factorizations(target_group, probe, maps):
    """Every element-level factorization of a probe cone, by enumeration."""
    return [x for x in target_group.elements() if all(m(x) == p for m, p in zip(maps, probe))]


def test_pullback_universal_property_on_finite_groups():
    rng = random.Random(12)
    for _ in range(10):
        A, B, C = (F([rng.choice([2, 3, 4, 6])]) for _ in range(3))
        f, g = random_hom(A, C, rng), random_hom(B, C, rng)
        P = pullback(f, g)
        # elements of the pullback are exactly the compatible pairs, each reached once
        pairs = [(a, b) for a in A.elements() for b in B.elements() if f(a) == g(b)]
        assert P.group.order() == len(pairs)
        for a, b in pairs:
            assert len(_probe_factorizations(P.group, (a, b), (P.alpha, P.beta))) == 1


def test_pushout_universal_property_on_finite_groups():
    rng = random.Random(13)
    for _ in range(8):
        A, B, C = (F([rng.choice([2, 3, 4, 6])]) for _ in range(3))
        f, g = random_hom(C, A, rng), random_hom(C, B, rng)
        Q = pushout(f, g)
        assert (Q.alpha @ f).equals(Q.beta @ g)
        # probe cones into Z/12: each compatible pair (u, v) factors through exactly one map
        T = cyc(12)
        Hq = hom_group(Q.group, T)
        for u in hom_group(A, T).elements():
            for v in hom_group(B, T).elements():
                if not (u @ f).equals(v @ g):
                    continue
                hits = [h for h in Hq.elements() if (h @ Q.alpha).equals(u) and (h @ Q.beta).equals(v)]
                assert len(hits) == 1


def test_equalizer_examples():
    A = F([4])
    f = GroupHom.identity(A)
    assert equalizer(f, f).group.is_isomorphic(A)
    assert equalizer(hom(Z, Z, [[2]]), hom(Z, Z, [[3]])).group.is_trivial
    E = equalizer(hom(cyc(4), cyc(4), [[1]]), hom(cyc(4), cyc(4), [[3]]))
    assert canon(E.group) == ([2], 0)


def test_coequalizer_examples():
    B = F([6])
    f = GroupHom.identity(B)
    assert coequalizer(f, f).group.is_isomorphic(B)
    assert canon(coequalizer(hom(Z, Z, [[2]]), GroupHom.zero(Z, Z)).group) == ([2], 0)
    assert canon(coequalizer(hom(Z, Z, [[5]]), hom(Z, Z, [[1]])).group) == ([4], 0)


# exactness, splitting, purity -----------------------------------------------------


def test_exactness_examples():
    five = hom(Z, Z, [[5]])
    assert is_exact_at(GroupHom.zero(FgAbGroup.zero(), Z), five)
    assert is_exact_at(GroupHom.zero(FgAbGroup.zero(), Z), hom(Z, Z, [[1]]))
    B = cyc(2)
    assert not is_exact_at(GroupHom.zero(FgAbGroup.zero(), B), GroupHom.zero(B, B))


def test_ses_validation():
    with pytest.raises(InputError):
        ShortExactSeq(hom(Z, Z, [[2]]), hom(Z, cyc(4), [[1]]))


def test_multiplication_by_five_is_not_split():
    s = multiplication_ses(5)
    assert s.C.canonical == cyc(5).canonical
    assert is_split(s) is None
    assert not is_pure(s)


def test_split_sequence_has_witnesses():
    s = ShortExactSeq.split(F([2, 4]), F([3], 1))
    w = is_split(s)
    assert w is not None
    assert (s.g @ w.section).equals(GroupHom.identity(s.C))
    assert (w.retraction @ s.f).equals(GroupHom.identity(s.A))
    assert is_pure(s)


def test_z2_z4_z2_not_split_by_exhaustion():
    s = cyclic_extension(2, 2)
    assert is_split(s) is None
    # the two candidate sections Z/2 -> Z/4 send 1 to 0 or 2; neither is a section
    sections = [h for h in hom_group(s.C, s.B).elements() if (s.g @ h).equals(GroupHom.identity(s.C))]
    assert sections == []
    assert not is_pure(s)


def test_isomorphism_sequence_is_pure():
    s = ShortExactSeq(hom(Z, Z, [[1]]), GroupHom.zero(Z, FgAbGroup.zero()))
    assert is_pure(s) and is_split(s) is not None


def test_coprime_extension_splits():
    s = cyclic_extension(3, 4)
    assert is_split(s) is not None and is_pure(s)


def test_pure_iff_split_on_random_family():
    from zhomalg.batteries import ses_family

    for item in ses_family(seed=21, count=30):
        assert (is_split(item.sequence) is not None) == item.split == is_pure(item.sequence)


# adjunction ------------------------------------------------------------------------


def test_adjunction_examples():
    assert hom_tensor_adjunction_check(cyc(2), cyc(2), cyc(2))
    assert hom_tensor_adjunction_check(FgAbGroup.zero(), cyc(4), cyc(6))
    assert hom_tensor_adjunction_check(cyc(4), cyc(6), cyc(2))


def test_adjunction_rejects_infinite():
    with pytest.raises(InputError):
        hom_tensor_adjunction_check(Z, cyc(2), cyc(2))


# literals and serialization ----------------------------------------------------------


def test_parse_examples():
    assert canon(parse_group("Z^2 + Z/2 + Z/12")) == ([2, 12], 2)
    assert canon(parse_group("Z/2+Z/3")) == ([6], 0)
    assert parse_group("0").is_trivial
    assert canon(parse_group("Z")) == ([], 1)


@pytest.mark.parametrize("text,pos", [("Z/", 0), ("Z/2 +", 5), ("Q", 0), ("Z/2 Z", 4), ("", 0)])
def test_parse_errors_are_located(text, pos):
    with pytest.raises(LiteralError) as exc:
        parse_group(text)
    assert exc.value.position is not None


@given(small_factor_lists(), st.integers(0, 3))
@settings(max_examples=50, deadline=None)
def test_literal_round_trip(factors, free):
    G = F(factors, free)
    assert parse_group(G.literal()).canonical == G.canonical


def test_hom_json_round_trip():
    rng = random.Random(2)
    for _ in range(10):
        G = random_group(rng, max_factor=8, max_free=1, max_count=2)
        H = random_group(rng, max_factor=8, max_free=1, max_count=2)
        f = random_hom(G, H, rng)
        g = hom_from_json(hom_to_json(f))
        sG, sH = G.simplification, H.simplification
        assert g.equals(sH.to_canonical @ f @ sG.from_canonical)
