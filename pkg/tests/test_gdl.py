"""Lexing, parsing, printing, validation, preprocessing, extraction, splice."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ludoforge import corpus
from ludoforge.gdl import (
    CategoryMismatch,
    IllegalCharacter,
    Node,
    Sym,
    TokenKind,
    UnbalancedParens,
    UnexpectedToken,
    UnknownMacro,
    extract_expressions,
    iter_nodes,
    load_macros,
    parse,
    parse_source,
    preprocess,
    print_canonical,
    splice,
    tokenize,
    validate,
)


# --- lexer ------------------------------------------------------------------

def test_tokenize_simple():
    kinds = [t.kind for t in tokenize("(players 2)")]
    assert kinds == [TokenKind.LPAREN, TokenKind.IDENT, TokenKind.INT, TokenKind.RPAREN]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_keyarg_from_listing():
    toks = tokenize('(to (sites Empty) if:(not (is In (to) (sites Around (last To)))))')
    keyargs = [t for t in toks if t.kind is TokenKind.KEYARG]
    assert [t.text for t in keyargs] == ["if:"]


def test_tokenize_reconstructs_source(corpus_sources):
    for src in corpus_sources.values():
        toks = tokenize(src)
        # token texts + the original inter-token gaps rebuild the source
        rebuilt = []
        pos = 0
        for t in toks:
            rebuilt.append(src[pos : t.span[0]])
            rebuilt.append(t.text)
            assert src[t.span[0] : t.span[1]] == t.text
            pos = t.span[1]
        rebuilt.append(src[pos:])
        assert "".join(rebuilt) == src


def test_tokenize_illegal_character():
    with pytest.raises(IllegalCharacter) as err:
        tokenize("(game @)")
    assert err.value.offset == 6


def test_tokenize_spans_ordered(corpus_sources):
    for src in corpus_sources.values():
        for t in tokenize(src):
            assert t.span[0] < t.span[1]


# --- parser -----------------------------------------------------------------

def test_parse_game_shape():
    tree = parse_source('(game "X" (players 2))')
    assert tree.root.head == "game"
    assert len(tree.root.args) == 2


def test_parse_exemplar_children(corpus_sources):
    tree = parse_source(corpus_sources["havabu"])
    heads = [a.head for a in tree.root.args if isinstance(a, Node)]
    assert heads == ["players", "equipment", "rules"]


def test_parse_dangling_paren():
    with pytest.raises(UnbalancedParens):
        parse(tokenize("(game (players 2)"))


def test_parse_stray_close():
    with pytest.raises(UnbalancedParens):
        parse(tokenize("(game))"))


def test_parse_empty_input():
    with pytest.raises(UnexpectedToken):
        parse(tokenize(""))


def test_parse_spans_nested(corpus_sources):
    tree = parse_source(corpus_sources["yavago"])
    nodes = list(iter_nodes(tree.root))
    root_span = tree.root.span
    for n in nodes:
        assert root_span[0] <= n.span[0] < n.span[1] <= root_span[1]
        # every node span is a balanced parenthetical region
        piece = tree.source[n.span[0] : n.span[1]]
        assert piece.startswith("(") and piece.endswith(")")
        assert piece.count("(") == piece.count(")")


def test_sibling_spans_disjoint(corpus_sources):
    tree = parse_source(corpus_sources["breakthrough6"])
    for n in iter_nodes(tree.root):
        child_spans = [c.span for c in iter_nodes(n) if c is not n and _direct(n, c)]
        for a in child_spans:
            for b in child_spans:
                if a != b:
                    assert a[1] <= b[0] or b[1] <= a[0]


def _direct(parent, child):
    from ludoforge.gdl.validate import _direct_child_nodes

    return child in _direct_child_nodes(parent)


# --- printer ----------------------------------------------------------------

def test_round_trip_corpus(corpus_sources):
    for name, src in corpus_sources.items():
        tree = parse_source(src)
        canon = print_canonical(tree)
        assert parse_source(canon).root == tree.root, name


def test_whitespace_insensitive():
    a = parse_source('(game "X"   (players   2))')
    b = parse_source('(game "X" (players 2))')
    assert print_canonical(a) == print_canonical(b)


def test_canonical_idempotent(corpus_sources):
    for src in corpus_sources.values():
        once = print_canonical(parse_source(src))
        assert print_canonical(parse_source(once)) == once


def test_canonical_revalidates(corpus_sources):
    canon = print_canonical(parse_source(corpus_sources["havabu"]))
    assert validate(parse_source(canon)).ok


# --- validation -------------------------------------------------------------

def test_corpus_validates(corpus_sources):
    for name, src in corpus_sources.items():
        report = validate(parse_source(src))
        assert report.ok, (name, report.messages())


def test_missing_board_reported():
    src = corpus.load_game("havabu").replace("(board (square 8))", "")
    report = validate(parse_source(src))
    assert not report.ok
    assert any("board" in m for m in report.messages())


def test_is_line_string_rejected():
    src = (
        '(game "X" (players 2) '
        '(equipment {(board (square 3)) (piece "D" Each)}) '
        "(rules (play (move Add (to (sites Empty)))) "
        '(end (if (is Line "five") (result Mover Win)))))'
    )
    report = validate(parse_source(src))
    assert not report.ok
    assert any("integer" in m for m in report.messages())


def test_int_out_of_range_rejected():
    src = (
        '(game "X" (players 2) (equipment {(board (square 99)) (piece "D" Each)}) '
        "(rules (play (move Add (to (sites Empty))))))"
    )
    report = validate(parse_source(src))
    assert not report.ok
    assert any("outside" in m for m in report.messages())


def test_validate_is_total_and_reports_all():
    src = (
        '(game "X" (players 2) '
        '(equipment {(piece "D" Each) (piece "E" Each)}) '
        "(rules (play (move Zap (to (sites Empty))))))"
    )
    report = validate(parse_source(src))
    assert not report.ok
    assert len(report.violations) >= 2  # unknown move kind + missing board


def test_validate_same_tree_same_report(corpus_sources):
    tree = parse_source(corpus_sources["yavalath"])
    assert validate(tree) == validate(tree)


# --- preprocess -------------------------------------------------------------

def test_macro_expansion():
    macros = load_macros(corpus.macros_dir())
    raw = (corpus.raw_dir() / "blockout.lud").read_text(encoding="utf-8")
    tree = preprocess(parse_source(raw), macros)
    ends = [n for n in iter_nodes(tree.root) if n.head == "end"]
    assert len(ends) == 1
    assert "no Moves Next" in print_canonical(ends[0])
    assert validate(tree).ok


def test_unknown_macro():
    src = '(game "X" (players 2) (equipment {(board (square 3)) (piece "D" Each)}) (rules ("Mystery") (play (move Add (to (sites Empty))))))'
    with pytest.raises(UnknownMacro):
        preprocess(parse_source(src), {})


def test_piece_anonymization(corpus_sources):
    tree = preprocess(parse_source(corpus_sources["hopthrough"]))
    text = print_canonical(tree)
    assert '"Counter"' not in text
    assert '"PIECE_ALPHA"' in text
    assert '"PIECE_ALPHA1"' in text  # placement refs keep the player digit
    assert '"GAME_NAME"' in text


def test_preprocess_fixpoint(corpus_sources):
    once = preprocess(parse_source(corpus_sources["havabu"]))
    twice = preprocess(once)
    assert once.root == twice.root


# --- extraction & splice ----------------------------------------------------

def _bracket_spans(source: str) -> list[tuple[int, int]]:
    """Independent oracle: spans of all balanced '(...)' regions."""
    stack, spans = [], []
    in_string = False
    for i, ch in enumerate(source):
        if ch == '"':
            in_string = not in_string
        if in_string:
            continue
        if ch == "(":
            stack.append(i)
        elif ch == ")":
            spans.append((stack.pop(), i + 1))
    assert not stack
    return sorted(spans)


def test_extract_count_matches_bracket_scan(corpus_sources):
    for name, src in corpus_sources.items():
        tree = parse_source(src)
        sites = extract_expressions(tree)
        assert len(sites) == len(_bracket_spans(src)), name
        assert sorted(s.span for s in sites) == _bracket_spans(src)


def test_extract_root_category(corpus_sources):
    sites = extract_expressions(parse_source(corpus_sources["tictactoe"]))
    assert sites[0].category == "game"


def test_extract_requires_valid_tree():
    with pytest.raises(ValueError):
        extract_expressions(parse_source('(game "X" (players 2))'))


def test_extract_site_spans_balanced(corpus_sources):
    src = corpus_sources["yavago"]
    for site in extract_expressions(parse_source(src)):
        piece = src[site.span[0] : site.span[1]]
        assert piece.count("(") == piece.count(")")


def test_splice_identity(corpus_sources):
    tree = parse_source(corpus_sources["squava"])
    root_site = extract_expressions(tree)[0]
    new = splice(tree, root_site, tree.root)
    assert new.root == tree.root


def test_splice_locality(corpus_sources):
    tree = parse_source(corpus_sources["gomoku"])
    site = next(s for s in extract_expressions(tree) if s.head == "square")
    new = splice(tree, site, "(square 11)")
    assert new.source[: site.span[0]] == tree.source[: site.span[0]]
    assert "(square 11)" in new.source
    assert validate(new).ok


def test_splice_category_mismatch(corpus_sources):
    tree = parse_source(corpus_sources["gomoku"])
    site = next(s for s in extract_expressions(tree) if s.head == "square")
    with pytest.raises(CategoryMismatch):
        splice(tree, site, "(players 2)")


def test_splice_unbalanced_replacement(corpus_sources):
    tree = parse_source(corpus_sources["gomoku"])
    site = next(s for s in extract_expressions(tree) if s.head == "square")
    with pytest.raises(UnbalancedParens):
        splice(tree, site, "(square 11")


def test_splice_end_rule_toward_enclosure(corpus_sources):
    """A line game accepts an enclosure-flavored move rule at the play site."""
    tree = parse_source(corpus_sources["yavalath"])
    site = next(s for s in extract_expressions(tree) if s.category == "moverule")
    replacement = (
        "(move Add (to (sites Empty)) (then (enclose (from (last To)) Orthogonal "
        "(between if:(is Enemy (who at:(between))) (apply (remove (between)))))))"
    )
    new = splice(tree, site, replacement)
    assert validate(new).ok
    assert "enclose" in new.source


# --- property: printing arbitrary symbol soup still round-trips ------------

@st.composite
def small_nodes(draw, depth=0):
    head = draw(st.sampled_from(["alpha", "beta", "gamma"]))
    n_args = draw(st.integers(0, 3 if depth < 2 else 0))
    args = []
    for _ in range(n_args):
        kind = draw(st.sampled_from(["int", "sym", "str", "node"]))
        if kind == "int":
            args.append(draw(st.integers(-99, 999)))
        elif kind == "sym":
            args.append(Sym(draw(st.sampled_from(["Foo", "Bar", "Baz"]))))
        elif kind == "str":
            args.append(draw(st.sampled_from(["Ada", "Zed"])))
        else:
            args.append(draw(small_nodes(depth=depth + 1)))
    return Node(head, tuple(args))


@settings(max_examples=120, deadline=None)
@given(small_nodes())
def test_print_parse_round_trip_property(node):
    text = print_canonical(node)
    assert parse_source(text).root == node
