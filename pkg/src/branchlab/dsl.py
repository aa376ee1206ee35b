"""Parser and printer for the .grp group-definition format.

Grammar (comments run from '#' to end of line)::

    file      := header stmt*
    header    := "alphabet" "=" INT
    stmt      := "gen" IDENT "=" "perm" perm "[" sections "]"
               | "gen" IDENT "=" "portrait" "{" (vertexperm ("," vertexperm)*)? "}"
    perm      := "(" cycle* ")"
    cycle     := "(" INT+ ")" | INT INT+
    sections  := word ("," word)*            -- exactly d words
    word      := "e" | IDENT ("^-1")? ("*" IDENT ("^-1")?)*
    vertexperm := STRING ":" perm

Identifiers may be used before they are defined, as wreath recursions are
usually mutually recursive. All diagnostics carry a 1-based line and column.
"""

from __future__ import annotations

from dataclasses import dataclass

from .perms import Permutation
from .tree import GroupDef, Node, Portrait, format_vertex


class DslError(Exception):
    """Syntax or consistency error in a .grp source, with position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line} col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class _Token:
    kind: str  # IDENT INT STRING PUNCT INV EOF
    value: str
    line: int
    col: int


_PUNCT = set("=()[]{},:*")


def _lex(text: str) -> list[_Token]:
    toks: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch in _PUNCT:
            toks.append(_Token("PUNCT", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == "^":
            if text[i : i + 3] == "^-1":
                toks.append(_Token("INV", "^-1", start_line, start_col))
                i += 3
                col += 3
                continue
            raise DslError("expected '^-1'", start_line, start_col)
        if ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise DslError("unterminated string", start_line, start_col)
            toks.append(_Token("STRING", text[i + 1 : j], start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Token("INT", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("IDENT", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        raise DslError(f"unexpected character {ch!r}", start_line, start_col)
    toks.append(_Token("EOF", "", line, col))
    return toks


class _Parser:
    def __init__(self, toks: list[_Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise DslError(message, tok.line, tok.col)

    def expect_punct(self, ch: str) -> _Token:
        t = self.peek()
        if t.kind != "PUNCT" or t.value != ch:
            self.fail(f"expected {ch!r}", t)
        return self.next()

    def expect_ident(self, what: str = "identifier") -> _Token:
        t = self.peek()
        if t.kind != "IDENT":
            self.fail(f"expected {what}", t)
        return self.next()

    def expect_keyword(self, kw: str) -> _Token:
        t = self.peek()
        if t.kind != "IDENT" or t.value != kw:
            self.fail(f"expected keyword {kw!r}", t)
        return self.next()

    def expect_int(self) -> tuple[int, _Token]:
        t = self.peek()
        if t.kind != "INT":
            self.fail("expected integer", t)
        self.next()
        return int(t.value), t

    # perm := "(" cycle* ")" ; cycle := "(" INT+ ")" | INT INT+
    def parse_perm(self, d: int) -> Permutation:
        open_tok = self.expect_punct("(")
        cycles: list[tuple[list[int], _Token]] = []
        t = self.peek()
        if t.kind == "INT":
            cyc = [self._cycle_letter(d)]
            while self.peek().kind == "INT":
                cyc.append(self._cycle_letter(d))
            if len(cyc) < 2:
                self.fail("a bare cycle needs at least two letters", t)
            cycles.append((cyc, t))
        else:
            while self.peek().kind == "PUNCT" and self.peek().value == "(":
                ct = self.next()
                cyc = []
                while self.peek().kind == "INT":
                    cyc.append(self._cycle_letter(d))
                if not cyc:
                    self.fail("empty cycle", ct)
                self.expect_punct(")")
                cycles.append((cyc, ct))
        self.expect_punct(")")
        seen: set[int] = set()
        for cyc, ct in cycles:
            if seen.intersection(cyc) or len(set(cyc)) != len(cyc):
                self.fail("cycles are not disjoint", ct)
            seen.update(cyc)
        try:
            return Permutation.from_cycles(d, [c for c, _ in cycles])
        except ValueError as exc:  # pragma: no cover - guarded above
            self.fail(str(exc), open_tok)

    def _cycle_letter(self, d: int) -> int:
        v, t = self.expect_int()
        if v >= d:
            self.fail(f"letter {v} out of range for alphabet of size {d}", t)
        return v

    # word := "e" | IDENT ("^-1")? ("*" IDENT ("^-1")?)*
    def parse_word(self) -> list[tuple[str, int, _Token]]:
        t = self.expect_ident("word")
        if t.value == "e":
            return []
        syms = [self._sym(t)]
        while self.peek().kind == "PUNCT" and self.peek().value == "*":
            self.next()
            nt = self.expect_ident("generator name")
            if nt.value == "e":
                self.fail("'e' cannot appear inside a product", nt)
            syms.append(self._sym(nt))
        return syms

    def _sym(self, t: _Token) -> tuple[str, int, _Token]:
        if self.peek().kind == "INV":
            self.next()
            return (t.value, -1, t)
        return (t.value, 1, t)


def parse(text: str, name: str | None = None) -> GroupDef:
    """Parse a .grp source into a GroupDef; raises DslError with position."""
    toks = _lex(text)
    p = _Parser(toks)
    p.expect_keyword("alphabet")
    p.expect_punct("=")
    d, dt = p.expect_int()
    if d < 2:
        p.fail("alphabet size must be at least 2", dt)
    if d > 10:
        p.fail("alphabet sizes above 10 are not supported by the vertex syntax", dt)

    stmts: list[tuple] = []  # (name, name_tok, kind, payload)
    names: dict[str, _Token] = {}
    while p.peek().kind != "EOF":
        p.expect_keyword("gen")
        nt = p.expect_ident("generator name")
        if nt.value == "e":
            p.fail("'e' is reserved for the identity", nt)
        if nt.value in names:
            p.fail(f"generator {nt.value!r} defined twice", nt)
        names[nt.value] = nt
        p.expect_punct("=")
        kw = p.expect_ident("'perm' or 'portrait'")
        if kw.value == "perm":
            perm = p.parse_perm(d)
            open_tok = p.expect_punct("[")
            words = [p.parse_word()]
            while p.peek().kind == "PUNCT" and p.peek().value == ",":
                p.next()
                words.append(p.parse_word())
            p.expect_punct("]")
            if len(words) != d:
                p.fail(f"expected {d} sections, got {len(words)}", open_tok)
            stmts.append((nt.value, nt, "perm", (perm, words)))
        elif kw.value == "portrait":
            p.expect_punct("{")
            entries: list[tuple[tuple[int, ...], Permutation]] = []
            seen_vertices: set[tuple[int, ...]] = set()
            if not (p.peek().kind == "PUNCT" and p.peek().value == "}"):
                while True:
                    st = p.peek()
                    if st.kind != "STRING":
                        p.fail("expected quoted vertex string", st)
                    p.next()
                    v = []
                    for ch in st.value:
                        if not ch.isdigit() or int(ch) >= d:
                            p.fail(f"bad vertex letter {ch!r}", st)
                        v.append(int(ch))
                    vt = tuple(v)
                    if vt in seen_vertices:
                        p.fail(f"vertex {st.value!r} listed twice", st)
                    seen_vertices.add(vt)
                    p.expect_punct(":")
                    entries.append((vt, p.parse_perm(d)))
                    if p.peek().kind == "PUNCT" and p.peek().value == ",":
                        p.next()
                        continue
                    break
            p.expect_punct("}")
            stmts.append((nt.value, nt, "portrait", entries))
        else:
            p.fail("expected 'perm' or 'portrait'", kw)

    # names may be used before their definition; resolve now
    for gname, _, kind, payload in stmts:
        if kind == "perm":
            for word in payload[1]:
                for sym, _, tok in word:
                    if sym not in names:
                        raise DslError(f"unknown generator {sym!r}", tok.line, tok.col)

    group = GroupDef(d, name=name)
    group.declare(*[s[0] for s in stmts])
    for gname, _, kind, payload in stmts:
        if kind == "perm":
            perm, words = payload
            sections = tuple(
                group.word([(sym, e) for sym, e, _ in word]) for word in words
            )
            group.define(gname, Node(perm, sections))
        else:
            group.define(gname, Portrait(d, dict(payload)))
    return group


def emit(group: GroupDef) -> str:
    """Render a GroupDef as .grp text; parse(emit(g)) reproduces it.

    Generator bodies must be one-level recursions with word sections, or
    portraits; other shapes have no syntax in the format.
    """
    lines = [f"alphabet = {group.d}"]
    from .tree import Word  # local import to avoid a cycle in type checks

    for name, body in group.generators.items():
        if isinstance(body, Portrait):
            entries = ", ".join(
                f'"{format_vertex(v)}": {q.cycle_text()}'
                for v, q in sorted(body.perms.items())
            )
            lines.append(f"gen {name} = portrait {{{entries}}}")
        elif isinstance(body, Node):
            for s in body.sections:
                if not isinstance(s, Word):
                    raise ValueError(
                        f"generator {name!r} has a non-word section; not representable"
                    )
            sections = ", ".join(s.text() for s in body.sections)
            lines.append(f"gen {name} = perm {body.perm.cycle_text()} [{sections}]")
        else:
            raise ValueError(f"generator {name!r} body form is not representable")
    return "\n".join(lines) + "\n"
