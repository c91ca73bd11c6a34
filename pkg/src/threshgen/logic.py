"""Propositional language over a fixed finite signature.

A proposition here is not a syntax tree but a *semantic* object: the set of
truth assignments (atoms) it holds in, encoded as a bitmask over the 2**r
atoms of an r-name signature. Atom i assigns True to name j exactly when
bit j of i is set. Under this encoding the connectives are bitwise ops and
entailment is a subset test, which is what the depth calculus and the
polytope builder both consume.

Syntax still matters at the edges (files, CLI, error messages), so
propositions parsed from text keep their source tree for display, and
propositions built by combinators compose display trees. Propositions
constructed directly from a mask render as a disjunction of atom terms.

The signature is deliberately capped at 24 names: masks are arbitrary
precision integers and 2**24 bits (2 MiB per proposition) is where exact
set semantics stops being a sensible default.
"""

from __future__ import annotations

import re
from typing import Iterator

MAX_NAMES = 24

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
# t and f are customary spellings of the constants in rule files, so they
# are keyword aliases rather than available names.
_KEYWORDS = {"true": "true", "t": "true", "false": "false", "f": "false"}


class SignatureError(ValueError):
    """Invalid signature, or an operation mixing distinct signatures."""


class ParseError(ValueError):
    """Syntax error in a proposition, with the offset it occurred at."""

    def __init__(self, message: str, text: str, position: int):
        self.bare_message = message
        self.position = position
        prefix = text[:position]
        self.line = prefix.count("\n") + 1
        self.column = position - (prefix.rfind("\n") + 1) + 1
        super().__init__(f"{message} (line {self.line}, column {self.column})")


class UnknownNameError(ParseError):
    """Identifier not present in the signature; the name is reported."""

    def __init__(self, name: str, text: str, position: int):
        super().__init__(f"unknown name {name!r}", text, position)
        self.name = name


class Signature:
    """Ordered collection of distinct primitive proposition names."""

    __slots__ = ("names", "_index", "_name_masks")

    def __init__(self, names):
        names = tuple(names)
        for name in names:
            if not _NAME_RE.match(name):
                raise SignatureError(f"invalid name {name!r}")
            if name in _KEYWORDS:
                raise SignatureError(f"{name!r} is reserved")
        if len(set(names)) != len(names):
            raise SignatureError("duplicate names in signature")
        if len(names) > MAX_NAMES:
            raise SignatureError(
                f"signature has {len(names)} names; the cap is {MAX_NAMES}"
            )
        self.names = names
        self._index = {name: j for j, name in enumerate(names)}
        self._name_masks: dict[int, int] = {}

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def atom_count(self) -> int:
        return 1 << len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << self.atom_count) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SignatureError(f"unknown name {name!r}") from None

    def name_mask(self, j: int) -> int:
        """Mask of the atoms that assign True to name j.

        Bit i is set iff bit j of i is set, i.e. blocks of 2**j set bits
        alternating with 2**j clear bits. Built once per name on demand.
        """
        mask = self._name_masks.get(j)
        if mask is None:
            if not 0 <= j < len(self.names):
                raise SignatureError(f"name index {j} out of range")
            half = 1 << j
            period = half << 1
            count = self.atom_count // period
            pattern = ((1 << half) - 1) << half
            replicate = ((1 << (period * count)) - 1) // ((1 << period) - 1)
            mask = pattern * replicate
            self._name_masks[j] = mask
        return mask

    def atom_text(self, i: int) -> str:
        """Render atom i as a conjunction of literals, e.g. 'a & ~b'."""
        if not 0 <= i < self.atom_count:
            raise SignatureError(f"atom index {i} out of range")
        if not self.names:
            return "true"
        lits = [
            name if (i >> j) & 1 else "~" + name
            for j, name in enumerate(self.names)
        ]
        return " & ".join(lits)

    def __eq__(self, other):
        return isinstance(other, Signature) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Signature({list(self.names)!r})"


def _check_same_signature(p: "Proposition", q: "Proposition") -> None:
    if p.signature != q.signature:
        raise SignatureError("propositions have different signatures")


class Proposition:
    """A set of atoms of a signature, with an optional display tree."""

    __slots__ = ("signature", "mask", "ast")

    def __init__(self, signature: Signature, mask: int, ast=None):
        if not 0 <= mask <= signature.full_mask:
            raise ValueError(f"mask {mask:#x} out of range for {signature!r}")
        self.signature = signature
        self.mask = mask
        self.ast = ast

    @classmethod
    def true(cls, signature: Signature) -> "Proposition":
        return cls(signature, signature.full_mask, ("const", True))

    @classmethod
    def false(cls, signature: Signature) -> "Proposition":
        return cls(signature, 0, ("const", False))

    @classmethod
    def name(cls, signature: Signature, name: str) -> "Proposition":
        return cls(signature, signature.name_mask(signature.index(name)), ("name", name))

    @classmethod
    def minterm(cls, signature: Signature, i: int) -> "Proposition":
        """The proposition holding in exactly atom i."""
        if not 0 <= i < signature.atom_count:
            raise ValueError(f"atom index {i} out of range")
        return cls(signature, 1 << i)

    # -- connectives -------------------------------------------------

    def __and__(self, other: "Proposition") -> "Proposition":
        _check_same_signature(self, other)
        return Proposition(
            self.signature, self.mask & other.mask, ("and", self._tree(), other._tree())
        )

    def __or__(self, other: "Proposition") -> "Proposition":
        _check_same_signature(self, other)
        return Proposition(
            self.signature, self.mask | other.mask, ("or", self._tree(), other._tree())
        )

    def __invert__(self) -> "Proposition":
        return Proposition(
            self.signature, self.signature.full_mask ^ self.mask, ("not", self._tree())
        )

    # -- judgments ---------------------------------------------------

    def entails(self, other: "Proposition") -> bool:
        """True iff every atom of self is an atom of other."""
        _check_same_signature(self, other)
        return self.mask | other.mask == other.mask

    def equivalent(self, other: "Proposition") -> bool:
        _check_same_signature(self, other)
        return self.mask == other.mask

    @property
    def is_false(self) -> bool:
        return self.mask == 0

    @property
    def is_true(self) -> bool:
        return self.mask == self.signature.full_mask

    def atoms(self) -> Iterator[int]:
        """Indices of the atoms this proposition holds in, ascending."""
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    # -- display -----------------------------------------------------

    def _tree(self):
        return self.ast if self.ast is not None else self

    def text(self) -> str:
        return _render(self._tree(), 0)

    def __eq__(self, other):
        return (
            isinstance(other, Proposition)
            and self.signature == other.signature
            and self.mask == other.mask
        )

    def __hash__(self):
        return hash((self.signature, self.mask))

    def __str__(self):
        return self.text()

    def __repr__(self):
        text = self.text()
        if len(text) > 80:
            text = text[:77] + "..."
        return f"Proposition({text!r})"


# Rendering precedence, loosest first: <->, ->, |, &, ~.
_PREC = {"iff": 1, "imp": 2, "or": 3, "and": 4, "not": 5}


def _render(node, parent_prec: int) -> str:
    if isinstance(node, Proposition):
        # No source tree: render the atom set as a disjunction of atom terms.
        if node.is_true:
            return "true"
        if node.is_false:
            return "false"
        terms = [node.signature.atom_text(i) for i in node.atoms()]
        if len(terms) == 1:
            text = terms[0]
            return f"({text})" if parent_prec > _PREC["and"] and " " in text else text
        text = " | ".join(f"({t})" if " & " in t else t for t in terms)
        return f"({text})" if parent_prec > _PREC["or"] else text
    kind = node[0]
    if kind == "const":
        return "true" if node[1] else "false"
    if kind == "name":
        return node[1]
    if kind == "not":
        return "~" + _render(node[1], _PREC["not"])
    op_text = {"and": " & ", "or": " | ", "imp": " -> ", "iff": " <-> "}[kind]
    prec = _PREC[kind]
    # The binary connectives associate, so child precedence equals prec.
    text = _render(node[1], prec) + op_text + _render(node[2], prec)
    return f"({text})" if parent_prec > prec else text


# -- parsing ---------------------------------------------------------

_SCAN_RE = re.compile(
    r"""(?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<iff><->)
      | (?P<imp>->)
      | (?P<not>~)
      | (?P<and>&)
      | (?P<or>\|)
      | (?P<lp>\()
      | (?P<rp>\))
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Scan text into (kind, value, offset) triples, dropping # comments."""
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch in " \t\r\n":
            pos += 1
            continue
        if ch == "#":
            nl = text.find("\n", pos)
            pos = n if nl < 0 else nl + 1
            continue
        match = _SCAN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {ch!r}", text, pos)
        kind = match.lastgroup
        value = match.group()
        if kind == "name" and value in _KEYWORDS:
            kind = _KEYWORDS[value]
        tokens.append((kind, value, pos))
        pos = match.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    """Recursive descent over the token list.

    Grammar, loosest binding first:
        proposition := iff
        iff  := imp ('<->' imp)*
        imp  := or ('->' imp)?          right-associative
        or   := and ('|' and)*
        and  := unary ('&' unary)*
        unary := '~' unary | '(' iff ')' | name | 'true' | 'false'

    't' and 'f' are accepted as aliases of 'true' and 'false', and all
    four spellings are reserved (never names).

    The conditional forms are sugar: p -> q abbreviates ~p | q and
    p <-> q abbreviates (p -> q) & (q -> p); they desugar during mask
    construction but keep their own display nodes.
    """

    def __init__(self, text: str, signature: Signature):
        self.text = text
        self.signature = signature
        self.tokens = tokenize(text)
        self.at = 0

    def peek(self) -> str:
        return self.tokens[self.at][0]

    def take(self) -> tuple[str, str, int]:
        token = self.tokens[self.at]
        self.at += 1
        return token

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        if self.peek() != kind:
            _, value, pos = self.tokens[self.at]
            found = repr(value) if value else "end of input"
            raise ParseError(f"expected {what}, found {found}", self.text, pos)
        return self.take()

    def proposition(self) -> Proposition:
        prop = self.iff()
        if self.peek() != "end":
            _, value, pos = self.tokens[self.at]
            raise ParseError(f"unexpected {value!r} after proposition", self.text, pos)
        return prop

    def iff(self) -> Proposition:
        prop = self.imp()
        full = self.signature.full_mask
        while self.peek() == "iff":
            self.take()
            right = self.imp()
            prop = Proposition(
                self.signature,
                full ^ prop.mask ^ right.mask,
                ("iff", prop._tree(), right._tree()),
            )
        return prop

    def imp(self) -> Proposition:
        prop = self.disj()
        if self.peek() == "imp":
            self.take()
            right = self.imp()
            full = self.signature.full_mask
            prop = Proposition(
                self.signature,
                (full ^ prop.mask) | right.mask,
                ("imp", prop._tree(), right._tree()),
            )
        return prop

    def disj(self) -> Proposition:
        prop = self.conj()
        while self.peek() == "or":
            self.take()
            prop = prop | self.conj()
        return prop

    def conj(self) -> Proposition:
        prop = self.unary()
        while self.peek() == "and":
            self.take()
            prop = prop & self.unary()
        return prop

    def unary(self) -> Proposition:
        kind, value, pos = self.take()
        if kind == "not":
            return ~self.unary()
        if kind == "lp":
            prop = self.iff()
            self.expect("rp", "')'")
            return prop
        if kind == "true":
            return Proposition.true(self.signature)
        if kind == "false":
            return Proposition.false(self.signature)
        if kind == "name":
            if value not in self.signature._index:
                raise UnknownNameError(value, self.text, pos)
            return Proposition.name(self.signature, value)
        found = repr(value) if value else "end of input"
        raise ParseError(f"expected a proposition, found {found}", self.text, pos)


def parse(text: str, signature: Signature) -> Proposition:
    """Parse text into a Proposition over the given signature.

    Raises ParseError on malformed input (with position) and
    UnknownNameError for identifiers outside the signature.
    """
    return _Parser(text, signature).proposition()


def scan_names(text: str) -> list[str]:
    """All identifiers in text in first-appearance order, keywords excluded.

    Used by file loaders to build a signature from the names a file
    actually mentions.
    """
    seen: dict[str, None] = {}
    for kind, value, _ in tokenize(text):
        if kind == "name":
            seen.setdefault(value)
    return list(seen)
