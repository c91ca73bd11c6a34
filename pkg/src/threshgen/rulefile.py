"""Flat-file formats for knowledge bases and default-rule sets.

Knowledge base files hold one generalization per line,

    <proposition> => <proposition> @ <threshold>

with thresholds a positive integer or ``inf``, ``#`` starting a comment,
and blank lines ignored. Default-rule files are the same shape with the
``->`` arrow and a non-negative integer strength:

    <proposition> -> <proposition> @ <strength>

The file's signature is the set of identifiers appearing anywhere in it,
in first-appearance order, optionally extended with names supplied by the
caller (a query's names, typically). Because ``->`` is also conditional
sugar inside propositions, the rule arrow of a default line is the first
``->`` at parenthesis depth 0 that is not part of ``<->``; an antecedent
that itself uses conditional sugar therefore needs parentheses.
"""

from __future__ import annotations

from .depth import INFINITY, Depth, Generalization, KnowledgeBase
from .logic import ParseError, Proposition, Signature, parse, scan_names
from .zplus import ZPlusRule


class RuleFileError(ValueError):
    """Malformed rule file; the message carries the offending line."""


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _parse_fragment(
    fragment: str, signature: Signature, lineno: int, offset: int
) -> Proposition:
    try:
        return parse(fragment, signature)
    except ParseError as error:
        column = offset + error.column
        raise RuleFileError(
            f"line {lineno}, column {column}: {error.bare_message}"
        ) from error


def _parse_threshold(text: str, lineno: int) -> Depth:
    text = text.strip()
    if text == "inf":
        return INFINITY
    try:
        value = int(text)
    except ValueError:
        value = 0
    if value < 1:
        raise RuleFileError(
            f"line {lineno}: threshold must be a positive integer or inf,"
            f" got {text!r}"
        )
    return value


def _parse_strength(text: str, lineno: int) -> int:
    text = text.strip()
    try:
        value = int(text)
    except ValueError:
        value = -1
    if value < 0:
        raise RuleFileError(
            f"line {lineno}: strength must be a non-negative integer, got {text!r}"
        )
    return value


def _split_at_sign(rest: str, lineno: int) -> tuple[str, str]:
    parts = rest.split("@")
    if len(parts) != 2:
        raise RuleFileError(f"line {lineno}: expected one '@ <number>' suffix")
    return parts[0], parts[1]


def _default_arrow_position(line: str) -> int:
    """Offset of the rule arrow in a default line, or -1.

    Skips arrows inside parentheses and the tail of '<->'.
    """
    depth = 0
    for i in range(len(line) - 1):
        ch = line[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif (
            ch == "-"
            and line[i + 1] == ">"
            and depth == 0
            and (i == 0 or line[i - 1] != "<")
        ):
            return i
    return -1


def _numbered_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if line.strip():
            yield lineno, line


def file_signature(text: str, extra_names=()) -> Signature:
    """Signature of every identifier in the file plus extra_names, in order."""
    names = scan_names(_strip_all_thresholds(text))
    for name in extra_names:
        if name not in names:
            names.append(name)
    return Signature(names)


def _strip_all_thresholds(text: str) -> str:
    # Identifier scanning must not see threshold text ('inf' would leak
    # into the signature) or the '=>' separator the tokenizer rejects, so
    # drop everything after '@' on each line and blank out the arrows.
    lines = []
    for raw in text.splitlines():
        line = _strip_comment(raw)
        lines.append(line.split("@")[0].replace("=>", " "))
    return "\n".join(lines)


def load_kb(text: str, extra_names=()) -> KnowledgeBase:
    """Parse knowledge base text into a KnowledgeBase."""
    signature = file_signature(text, extra_names)
    rules = []
    for lineno, line in _numbered_lines(text):
        arrow = line.find("=>")
        if arrow < 0:
            raise RuleFileError(f"line {lineno}: expected '=>' between propositions")
        rest, threshold_text = _split_at_sign(line[arrow + 2 :], lineno)
        antecedent = _parse_fragment(line[:arrow], signature, lineno, 0)
        consequent = _parse_fragment(rest, signature, lineno, arrow + 2)
        threshold = _parse_threshold(threshold_text, lineno)
        rules.append(Generalization(antecedent, consequent, threshold))
    return KnowledgeBase(signature, tuple(rules))


def load_defaults(text: str, extra_names=()) -> tuple[list[ZPlusRule], Signature]:
    """Parse default-rule text into ZPlusRules plus their signature."""
    signature = file_signature(text, extra_names)
    rules = []
    for lineno, line in _numbered_lines(text):
        arrow = _default_arrow_position(line)
        if arrow < 0:
            raise RuleFileError(
                f"line {lineno}: expected '->' between propositions"
                " (antecedents using conditional sugar need parentheses)"
            )
        rest, strength_text = _split_at_sign(line[arrow + 2 :], lineno)
        antecedent = _parse_fragment(line[:arrow], signature, lineno, 0)
        consequent = _parse_fragment(rest, signature, lineno, arrow + 2)
        strength = _parse_strength(strength_text, lineno)
        rules.append(ZPlusRule(antecedent, consequent, strength))
    return rules, signature


def parse_query(text: str, signature: Signature) -> Generalization:
    """Parse a query string '<prop> => <prop> @ <threshold>'."""
    arrow = text.find("=>")
    if arrow < 0:
        raise RuleFileError("query must look like '<prop> => <prop> @ <threshold>'")
    rest, threshold_text = _split_at_sign(text[arrow + 2 :], 1)
    antecedent = _parse_fragment(text[:arrow], signature, 1, 0)
    consequent = _parse_fragment(rest, signature, 1, arrow + 2)
    return Generalization(antecedent, consequent, _parse_threshold(threshold_text, 1))


def query_names(text: str) -> list[str]:
    """Identifiers a query string would add to a signature."""
    return scan_names(_strip_all_thresholds(text))


def format_kb(kb: KnowledgeBase) -> str:
    return "".join(rule.text() + "\n" for rule in kb.rules)


def format_defaults(rules) -> str:
    return "".join(rule.text() + "\n" for rule in rules)
