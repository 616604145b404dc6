"""Knowledge-base template tests: parsing, completion, instantiation, files."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from planforge.kb import (
    DuplicateTemplate,
    EmptyTemplate,
    KnowledgeBase,
    MalformedLine,
    MalformedToken,
    PredicateTemplate,
    TypeTemplate,
    complete,
    default_kb,
    instantiate_predicate,
    instantiate_type,
    load_kb,
    parse_template,
    save_kb,
)
from planforge.pddl import PredicateDecl
from planforge.workspace import check_consistency, new_project, apply_edit, DeclareClass, DeclarePredicate


def test_parse_template_plain():
    t = parse_template("at physobj place")
    assert t == PredicateTemplate("at", ("physobj", "place"))


def test_parse_template_zero_arity():
    assert parse_template("handempty") == PredicateTemplate("handempty", ())


def test_parse_template_parenthesized():
    assert parse_template("(in package truck)") == PredicateTemplate("in", ("package", "truck"))


def test_parse_template_errors():
    with pytest.raises(EmptyTemplate):
        parse_template("   ")
    with pytest.raises(MalformedToken):
        parse_template("at (physobj place")
    with pytest.raises(MalformedToken):
        parse_template("at ?x place")


@pytest.fixture()
def small_kb():
    return KnowledgeBase.build(
        predicates=[
            PredicateTemplate("at", ("physobj", "place")),
            PredicateTemplate("in", ("package", "truck")),
            PredicateTemplate("in-city", ("place", "city")),
        ]
    )


def test_complete_prefix(small_kb):
    results = complete(small_kb, "predicate", "in")
    assert [t.identifier for t in results] == ["in", "in-city"]


def test_complete_empty_prefix(small_kb):
    assert len(complete(small_kb, "predicate", "")) == 3


def test_complete_no_match(small_kb):
    assert complete(small_kb, "predicate", "zz") == ()


def test_complete_case_normalized(small_kb):
    assert complete(small_kb, "predicate", "IN") == complete(small_kb, "predicate", "in")


def test_complete_types():
    kb = default_kb()
    assert [t.name for t in complete(kb, "type", "p")] == ["package", "physobj", "place"]


def test_instantiate_predicate():
    decl = instantiate_predicate(PredicateTemplate("at", ("physobj", "place")))
    assert decl == PredicateDecl("at", (("?x1", "physobj"), ("?x2", "place")))


def test_instantiate_zero_arity():
    assert instantiate_predicate(PredicateTemplate("handempty")) == PredicateDecl("handempty")


def test_instantiate_in():
    decl = instantiate_predicate(PredicateTemplate("in", ("package", "truck")))
    assert decl == PredicateDecl("in", (("?x1", "package"), ("?x2", "truck")))


def test_instantiate_type():
    assert instantiate_type(TypeTemplate("package"), "physobj") == ("package", "physobj")
    assert instantiate_type(TypeTemplate("physobj"), "object") == ("physobj", "object")
    assert instantiate_type(TypeTemplate("location"), "place") == ("location", "place")


def test_instantiated_predicate_is_consistent():
    """Instantiation into a project that declares the types yields no diagnostics."""
    project = new_project("demo")
    project, _ = apply_edit(project, DeclareClass("physobj", "object"))
    project, _ = apply_edit(project, DeclareClass("place", "object"))
    decl = instantiate_predicate(PredicateTemplate("at", ("physobj", "place")))
    project, diagnostics = apply_edit(project, DeclarePredicate(decl))
    assert diagnostics == []
    assert check_consistency(project) == []


def test_load_kb_sections():
    kb = load_kb("[types]\nphysobj\n[predicates]\nat physobj place\n")
    assert kb.types == (TypeTemplate("physobj"),)
    assert kb.predicates == (PredicateTemplate("at", ("physobj", "place")),)


def test_load_kb_empty():
    assert load_kb("") == KnowledgeBase()


def test_load_kb_comments_blank_lines():
    kb = load_kb("# heading\n\n[types]\ncity # trailing note\n[predicates]\n")
    assert kb.types == (TypeTemplate("city"),)


def test_load_kb_errors():
    with pytest.raises(MalformedLine):
        load_kb("stray-template\n")
    with pytest.raises(MalformedLine):
        load_kb("[nope]\n")
    with pytest.raises(MalformedLine):
        load_kb("[types]\nphysobj extra\n")
    with pytest.raises(DuplicateTemplate):
        load_kb("[predicates]\nat physobj place\nat physobj place\n")


def test_overloaded_arity_allowed():
    kb = load_kb("[predicates]\nat thing\nat physobj place\n")
    assert [(p.identifier, p.arity) for p in kb.predicates] == [("at", 1), ("at", 2)]


def test_default_kb_contents():
    kb = default_kb()
    assert [t.name for t in kb.types] == [
        "airplane", "airport", "city", "location", "package", "physobj", "place", "truck",
    ]
    assert [p.format() for p in kb.predicates] == [
        "at physobj place", "in package truck", "in-city place city",
    ]


def test_save_load_roundtrip():
    kb = default_kb()
    assert load_kb(save_kb(kb)) == kb


def test_load_save_fixpoint():
    text = "[types]\ncity\nphysobj\n[predicates]\nat physobj place\n"
    assert save_kb(load_kb(save_kb(load_kb(text)))) == save_kb(load_kb(text))


identifier = st.from_regex(r"[a-z][a-z0-9-]{0,5}", fullmatch=True)


@st.composite
def knowledge_bases(draw):
    rows = draw(
        st.lists(
            st.tuples(identifier, st.lists(identifier, max_size=3)),
            max_size=6,
            unique_by=lambda r: (r[0], len(r[1])),
        )
    )
    return KnowledgeBase.build(
        predicates=[PredicateTemplate(name, tuple(types)) for name, types in rows]
    )


@given(knowledge_bases(), identifier, st.text(alphabet="abcdefgh-", max_size=2))
def test_complete_monotone_and_sorted(kb, prefix, extension):
    shorter = complete(kb, "predicate", prefix)
    longer = complete(kb, "predicate", prefix + extension)
    assert set(longer) <= set(shorter)
    assert set(shorter) <= set(kb.predicates)
    assert list(shorter) == sorted(shorter, key=lambda p: (p.identifier, p.arity))


@given(knowledge_bases())
def test_save_load_identity(kb):
    assert load_kb(save_kb(kb)) == kb
