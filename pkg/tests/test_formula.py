import pytest
from hypothesis import given

from nfbench.errors import FormulaSyntaxError, TranslationError, UnboundVariableError
from nfbench.formula import (
    And, Atom, AxiomId, Exists, Forall, Iff, Implies, Not, Or, Pred, RelSym,
    atoms, builtin_axioms, free_vars, parse_formula, print_formula,
    quantifier_count, recode_translate, split_axiom, subformulas,
)

from strategies import formulas_st


def test_parse_complement_body():
    phi = parse_formula("forall z. (z mem y <-> ~(z mem x))")
    assert phi == Forall("z", Iff(Atom(RelSym.MEM, "z", "y"), Not(Atom(RelSym.MEM, "z", "x"))))
    assert free_vars(phi) == {"x", "y"}


def test_parse_self_membership():
    assert parse_formula("x mem x") == Atom(RelSym.MEM, "x", "x")


def test_russell_is_closed():
    phi = parse_formula("exists y. forall x. (x mem y <-> ~(x mem x))", closed=True)
    assert isinstance(phi, Exists)
    assert free_vars(phi) == set()


@pytest.mark.parametrize("text,rel", [
    ("a mem b", RelSym.MEM), ("a mem* b", RelSym.MEM_STAR), ("a mem' b", RelSym.MEM_PRIME),
    ("a memf b", RelSym.MEM_F), ("a = b", RelSym.EQ),
])
def test_relation_keywords(text, rel):
    assert parse_formula(text) == Atom(rel, "a", "b")


def test_precedence_and_associativity():
    a, b, c = (Atom(RelSym.MEM, v, "s") for v in "abc")
    assert parse_formula("a mem s /\\ b mem s \\/ c mem s") == Or(And(a, b), c)
    assert parse_formula("a mem s -> b mem s -> c mem s") == Implies(a, Implies(b, c))
    assert parse_formula("~a mem s /\\ b mem s") == And(Not(a), b)
    assert parse_formula("a mem s <-> b mem s <-> c mem s") == Iff(Iff(a, b), c)


def test_quantifier_extends_right():
    phi = parse_formula("forall x. x mem y /\\ y mem x")
    assert phi == Forall("x", And(Atom(RelSym.MEM, "x", "y"), Atom(RelSym.MEM, "y", "x")))


def test_comments_and_newlines():
    phi = parse_formula("# header\nforall x. # trailing\n  x = x\n")
    assert phi == Forall("x", Atom(RelSym.EQ, "x", "x"))


def test_syntax_error_position_and_expected():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("forall x.\n  (x mem )")
    err = info.value
    assert (err.line, err.column) == (2, 10)
    assert "IDENT" in err.expected


def test_syntax_error_on_trailing_input():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("x mem y y")
    assert info.value.column == 9


def test_bad_character():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("x mem y & y mem x")


def test_closed_context_rejects_free_variables():
    with pytest.raises(UnboundVariableError) as info:
        parse_formula("forall x. x mem y", closed=True)
    assert info.value.names == ("y",)


def test_print_examples():
    assert print_formula(Atom(RelSym.MEM, "x", "y")) == "x mem y"
    assert print_formula(Not(Atom(RelSym.EQ, "x", "y"))) == "~(x = y)"
    nested = Forall("x", Exists("y", Atom(RelSym.MEM, "x", "y")))
    assert print_formula(nested) == "forall x. exists y. x mem y"
    left_quant = And(Forall("x", Atom(RelSym.EQ, "x", "x")), Atom(RelSym.EQ, "y", "y"))
    assert print_formula(left_quant) == "((forall x. x = x) /\\ y = y)"
    assert parse_formula(print_formula(left_quant)) == left_quant


def test_free_vars_examples():
    assert free_vars(parse_formula("x mem y")) == {"x", "y"}
    assert free_vars(parse_formula("forall x. x mem y")) == {"y"}


def test_normalization_renames_apart():
    phi = parse_formula("x mem y /\\ forall x. exists x. x mem x")
    binders = [s.var for s in subformulas(phi) if isinstance(s, (Forall, Exists))]
    assert len(set(binders)) == len(binders)
    assert not set(binders) & free_vars(phi)
    assert free_vars(phi) == {"x", "y"}


@given(formulas_st())
def test_round_trip(phi):
    assert parse_formula(print_formula(phi)) == phi


@given(formulas_st())
def test_no_shadowing_after_normalization(phi):
    binders = [s.var for s in subformulas(phi) if isinstance(s, (Forall, Exists))]
    assert len(set(binders)) == len(binders)


# ------------------------------------------------------------ translation

def test_translate_complements_substitutes_symbol():
    [(_, comp)] = [a for a in builtin_axioms() if a[0] is AxiomId.COMPLEMENTS]
    out = recode_translate(comp, RelSym.MEM, RelSym.MEM_PRIME)
    assert print_formula(out) == "forall x. exists y. forall z. (z mem' y <-> ~(z mem' x))"


def test_translate_guard_leaves_atoms_alone():
    out = recode_translate(parse_formula("x mem y"), RelSym.MEM, RelSym.MEM_PRIME, "D")
    assert out == Atom(RelSym.MEM_PRIME, "x", "y")


def _count_guards(phi):
    return sum(isinstance(s, Pred) for s in subformulas(phi))


def test_translate_pairing_relativizes_each_quantifier():
    phi = dict(builtin_axioms())[AxiomId.PAIRING]
    out = recode_translate(phi, RelSym.MEM, RelSym.MEM_PRIME, "D")
    # a, b, y, z: one guard per quantifier
    assert quantifier_count(phi) == 4
    assert _count_guards(out) == 4
    assert print_formula(out) == (
        "forall a. (D(a) -> forall b. (D(b) -> exists y. (D(y) /\\ "
        "forall z. (D(z) -> (z mem' y <-> (z = a \\/ z = b))))))"
    )


def test_translate_rejects_foreign_atoms():
    with pytest.raises(TranslationError):
        recode_translate(parse_formula("x memf y"), RelSym.MEM, RelSym.MEM_STAR)


@given(formulas_st(rels=(RelSym.EQ, RelSym.MEM)))
def test_translate_preserves_counts(phi):
    plain = recode_translate(phi, RelSym.MEM, RelSym.MEM_F)
    assert len(atoms(plain)) == len(atoms(phi))
    assert quantifier_count(plain) == quantifier_count(phi)
    assert not any(a.rel is RelSym.MEM for a in atoms(plain))
    guarded = recode_translate(phi, RelSym.MEM, RelSym.MEM_F, "D")
    assert _count_guards(guarded) == quantifier_count(phi)
    assert len(atoms(guarded)) == len(atoms(phi))


# ---------------------------------------------------------------- axioms

def test_builtin_axiom_texts():
    texts = {aid: print_formula(phi) for aid, phi in builtin_axioms()}
    assert texts[AxiomId.COMPLEMENTS] == "forall x. exists y. forall z. (z mem y <-> ~(z mem x))"
    assert texts[AxiomId.PAIRING] == (
        "forall a. forall b. exists y. forall z. (z mem y <-> (z = a \\/ z = b))"
    )
    assert texts[AxiomId.SET_UNION] == (
        "forall x. exists y. forall z. (z mem y <-> exists w. (z mem w /\\ w mem x))"
    )


def test_builtin_axioms_are_closed_and_pure():
    axioms = builtin_axioms()
    assert [aid for aid, _ in axioms] == [
        AxiomId.COMPLEMENTS, AxiomId.PAIRING, AxiomId.SET_UNION,
        AxiomId.U_COMPOSITION, AxiomId.U_INTERSECTION,
    ]
    for _, phi in axioms:
        assert free_vars(phi) == set()
        assert {a.rel for a in atoms(phi)} <= {RelSym.EQ, RelSym.MEM}
        assert parse_formula(print_formula(phi)) == phi


def test_split_axiom_shapes():
    ax = dict(builtin_axioms())
    assert split_axiom(ax[AxiomId.PAIRING])[:2] == (("a", "b"), "y")
    assert split_axiom(ax[AxiomId.U_COMPOSITION])[:2] == (("r", "s"), "X")
    assert split_axiom(ax[AxiomId.U_INTERSECTION])[:2] == ((), "X")


def test_axiom_id_parse_aliases():
    assert AxiomId.parse("ext") is AxiomId.EXTENSIONALITY
    assert AxiomId.parse("u-composition") is AxiomId.U_COMPOSITION
