from itertools import product

import pytest
from hypothesis import given

from nfbench.errors import MissingVariableError
from nfbench.formula import AxiomId, RelSym, all_vars, builtin_axioms, parse_formula, recode_translate
from nfbench.stratification import StratFailure, Typing, check_typing, stratify

from strategies import formulas_st


def brute_force_typing(phi, lo=0, hi=4):
    """Search all level assignments in [lo, hi]; the independent oracle."""
    names = sorted(all_vars(phi))
    for levels in product(range(lo, hi + 1), repeat=len(names)):
        t = dict(zip(names, levels))
        if check_typing(phi, t):
            return t
    return None


COMPLEMENT_BODY = "forall z. (z mem y <-> ~(z mem x))"


def test_complement_body_typing():
    phi = parse_formula(COMPLEMENT_BODY)
    t = stratify(phi)
    assert isinstance(t, Typing)
    assert t.levels == {"z": 0, "x": 1, "y": 1}
    assert check_typing(phi, t)


def test_self_membership_fails_with_cycle():
    res = stratify(parse_formula("x mem x"))
    assert isinstance(res, StratFailure)
    assert [(a.left, a.right) for a in res.cycle] == [("x", "x")]
    assert res.offset == 1
    assert res.is_valid()


def test_equality_typing():
    assert stratify(parse_formula("x = y")).levels == {"x": 0, "y": 0}


def test_composition_axiom_levels():
    phi = dict(builtin_axioms())[AxiomId.U_COMPOSITION]
    t = stratify(phi)
    assert isinstance(t, Typing) and check_typing(phi, t)
    # pair members sit one below the pair, two below the relation sets
    assert t["p"] == t["x"] + 1 == t["z"] + 1
    assert t["r"] == t["s"] == t["X"] == t["x"] + 2
    assert t["q"] == t["p"]


def test_check_typing_examples():
    phi = parse_formula(COMPLEMENT_BODY)
    assert check_typing(phi, {"z": 0, "x": 1, "y": 1})
    assert not check_typing(phi, {"z": 0, "x": 0, "y": 1})
    assert check_typing(parse_formula("x = y"), {"x": 2, "y": 2})


def test_check_typing_missing_variable():
    with pytest.raises(MissingVariableError):
        check_typing(parse_formula("x mem y"), {"x": 0})


def test_russell_body_unstratified():
    res = stratify(parse_formula("x mem y <-> ~(x mem x)"))
    assert isinstance(res, StratFailure) and res.is_valid()


def test_longer_cycle_certificate():
    res = stratify(parse_formula("x mem y /\\ y mem z /\\ z = x"))
    assert isinstance(res, StratFailure)
    assert res.is_valid()
    assert abs(res.offset) == 2
    assert len(res.cycle) == 3


def test_guards_impose_nothing():
    phi = recode_translate(parse_formula(COMPLEMENT_BODY), RelSym.MEM, RelSym.MEM_PRIME, "D")
    assert stratify(phi).levels == {"z": 0, "x": 1, "y": 1}


def test_disjoint_components_normalized_separately():
    t = stratify(parse_formula("x mem y /\\ u mem v /\\ v mem w"))
    assert t.levels == {"x": 0, "y": 1, "u": 0, "v": 1, "w": 2}


@given(formulas_st(max_leaves=6))
def test_soundness_and_certificates(phi):
    res = stratify(phi)
    if isinstance(res, Typing):
        assert check_typing(phi, res)
        assert min(res.levels.values(), default=0) == 0
    else:
        assert res.is_valid()


@given(formulas_st(max_leaves=5))
def test_shift_invariance(phi):
    res = stratify(phi)
    if isinstance(res, Typing):
        for c in (-3, 1, 7):
            assert check_typing(phi, res.shifted(c))


@given(formulas_st(rels=(RelSym.EQ, RelSym.MEM), max_leaves=6))
def test_translation_preserves_typing(phi):
    for flavor in (RelSym.MEM_STAR, RelSym.MEM_PRIME, RelSym.MEM_F):
        a, b = stratify(phi), stratify(recode_translate(phi, RelSym.MEM, flavor))
        assert type(a) is type(b)
        if isinstance(a, Typing):
            assert a.levels == b.levels


@given(formulas_st(max_leaves=4))
def test_completeness_against_brute_force(phi):
    if len(all_vars(phi)) > 4:
        return
    res = stratify(phi)
    oracle = brute_force_typing(phi)
    assert (oracle is None) == isinstance(res, StratFailure)
