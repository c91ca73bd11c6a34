"""Command-line front end.

Subcommands: check, query, rarity, depthmap, explain, zplus to|from, and
validate. Input is a knowledge base file (--kb) plus, where relevant, a
query or proposition string; names appearing only in the query enlarge
the signature before compilation, which never changes verdicts about the
file's own names. Output is a human-readable block by default or a
line-oriented ``key=value`` block with --format kv; kv output is stable
and bit-exact across runs for identical inputs and seed.

Exit codes: 0 for the affirmative verdict (consistent / entailed /
supports, and plain success for the other commands), 2 for inconsistent,
3 for not entailed or refuted, 4 for inconclusive, 1 for any input error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .depth import (
    Depth,
    DepthProfile,
    Generalization,
    compile_kb,
    depth_text,
)
from .logic import Proposition, parse
from .polytope import NumericalError, ParameterAssignment
from .rulefile import (
    format_defaults,
    format_kb,
    load_defaults,
    load_kb,
    parse_query,
    query_names,
)
from .sampling import scaling_verdict
from .zplus import from_zplus, to_zplus


@dataclass(frozen=True)
class QueryRecord:
    """One entailment decision, ready for text or kv serialization."""

    gamma: Proposition
    zeta: Proposition
    threshold: Depth
    verdict: bool
    depth_antecedent: Depth
    depth_exception: Depth
    vacuous: bool

    def __post_init__(self):
        expected = self.depth_exception >= self.depth_antecedent + self.threshold
        if self.verdict != expected:
            raise ValueError("verdict contradicts the recorded depths")

    @classmethod
    def evaluate(cls, profile: DepthProfile, query: Generalization) -> "QueryRecord":
        depth_exception = profile.depth_of(query.exception())
        depth_antecedent = profile.depth_of(query.antecedent)
        return cls(
            gamma=query.antecedent,
            zeta=query.consequent,
            threshold=query.threshold,
            verdict=depth_exception >= depth_antecedent + query.threshold,
            depth_antecedent=depth_antecedent,
            depth_exception=depth_exception,
            vacuous=query.antecedent.is_false,
        )


def _kv_bool(value: bool) -> str:
    return "true" if value else "false"


def _kv_block(pairs) -> str:
    return "".join(f"{key}={value}\n" for key, value in pairs)


def parse_kv(text: str) -> dict[str, str]:
    """Parse a kv block back into a dict (the inverse of --format kv)."""
    record = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"not a key=value line: {line!r}")
        record[key] = value
    return record


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _float_text(x: float) -> str:
    return "inf" if x == float("inf") else format(x, ".6g")


def _chain_lines(profile: DepthProfile, with_rules: bool) -> list[str]:
    lines = []
    for d, prop in enumerate(profile.chain):
        line = f"depth {d}: {prop.text()}"
        if with_rules and d > 0:
            fired = ", ".join(str(i + 1) for i in profile.fired[d])
            line += f"  (rules: {fired or 'none'})"
        lines.append(line)
    return lines


def cmd_check(args) -> int:
    profile = compile_kb(load_kb(_read(args.kb)))
    consistent = profile.is_consistent()
    if args.format == "kv":
        pairs = [("consistent", _kv_bool(consistent)), ("D", profile.fixpoint)]
        pairs += [
            (f"chain_{d}", prop.text()) for d, prop in enumerate(profile.chain)
        ]
        print(_kv_block(pairs), end="")
    else:
        print("consistent" if consistent else "inconsistent")
        print(f"D = {profile.fixpoint}")
        for line in _chain_lines(profile, with_rules=False):
            print(line)
    return 0 if consistent else 2


def cmd_query(args) -> int:
    text = _read(args.kb)
    kb = load_kb(text, extra_names=query_names(args.query))
    profile = compile_kb(kb)
    query = parse_query(args.query, kb.signature)
    record = QueryRecord.evaluate(profile, query)
    if args.format == "kv":
        print(
            _kv_block(
                [
                    ("verdict", _kv_bool(record.verdict)),
                    ("d_exception", depth_text(record.depth_exception)),
                    ("d_antecedent", depth_text(record.depth_antecedent)),
                    ("threshold", depth_text(record.threshold)),
                    ("D", profile.fixpoint),
                    ("consistent", _kv_bool(profile.is_consistent())),
                    ("vacuous", _kv_bool(record.vacuous)),
                ]
            ),
            end="",
        )
    else:
        print(f"query: {query.text()}")
        print("entailed" if record.verdict else "not entailed")
        print(f"d_exception = {depth_text(record.depth_exception)}")
        print(f"d_antecedent = {depth_text(record.depth_antecedent)}")
        if record.vacuous:
            print("vacuous: the antecedent is impossible")
    return 0 if record.verdict else 3


def cmd_rarity(args) -> int:
    kb = load_kb(_read(args.kb), extra_names=query_names(args.proposition))
    profile = compile_kb(kb)
    rarity = profile.degree_of_rarity(parse(args.proposition, kb.signature))
    if args.format == "kv":
        print(_kv_block([("rarity", depth_text(rarity))]), end="")
    else:
        print(f"rarity = {depth_text(rarity)}")
    return 0


def cmd_depthmap(args) -> int:
    profile = compile_kb(load_kb(_read(args.kb)))
    signature = profile.kb.signature
    depths = [
        profile.depth_of(Proposition.minterm(signature, i))
        for i in range(signature.atom_count)
    ]
    if args.format == "kv":
        pairs = [("names", ",".join(signature.names))]
        pairs += [(f"atom_{i}", depth_text(d)) for i, d in enumerate(depths)]
        print(_kv_block(pairs), end="")
    else:
        for i, d in enumerate(depths):
            print(f"{signature.atom_text(i)}: {depth_text(d)}")
    return 0


def cmd_explain(args) -> int:
    profile = compile_kb(load_kb(_read(args.kb)))
    if args.format == "kv":
        pairs = [
            ("consistent", _kv_bool(profile.is_consistent())),
            ("D", profile.fixpoint),
            ("window", profile.window),
        ]
        for d, prop in enumerate(profile.chain):
            pairs.append((f"chain_{d}", prop.text()))
            if d > 0:
                pairs.append(
                    (f"rules_{d}", ",".join(str(i + 1) for i in profile.fired[d]))
                )
        print(_kv_block(pairs), end="")
    else:
        for i, rule in enumerate(profile.kb.rules):
            print(f"rule {i + 1}: {rule.text()}")
        print(f"D = {profile.fixpoint} (window {profile.window})")
        for line in _chain_lines(profile, with_rules=True):
            print(line)
    return 0


def cmd_zplus(args) -> int:
    text = _read(args.kb)
    if args.direction == "to":
        print(format_defaults(to_zplus(load_kb(text))), end="")
    else:
        rules, signature = load_defaults(text)
        print(format_kb(from_zplus(rules, signature)), end="")
    return 0


def _parse_grid(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"malformed delta grid {text!r}") from None


def _parse_psi(text: str, rule_count: int) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"malformed psi list {text!r}") from None
    if len(values) == 1:
        return values * rule_count
    return values


def cmd_validate(args) -> int:
    text = _read(args.kb)
    kb = load_kb(text, extra_names=query_names(args.query))
    query = parse_query(args.query, kb.signature)
    grid = _parse_grid(args.delta_grid)
    params = ParameterAssignment(
        psi=_parse_psi(args.psi, kb.size),
        delta=grid[0],
        eta=args.eta,
    )
    report = scaling_verdict(
        kb, query, grid, params, n=args.samples, seed=args.seed
    )
    if args.format == "kv":
        pairs = [
            ("verdict", report.verdict),
            ("fitted_exponent", _float_text(report.fitted_exponent)),
            ("threshold", depth_text(report.threshold)),
            ("delta_grid", ",".join(_float_text(d) for d in report.delta_grid)),
            ("psi_scales", ",".join(_float_text(s) for s in report.psi_scales)),
            (
                "exponents",
                ",".join(_float_text(e) for e in report.exponents),
            ),
        ]
        for i, row in enumerate(report.quantiles):
            pairs.append((f"quantiles_{i}", ",".join(_float_text(q) for q in row)))
        print(_kv_block(pairs), end="")
    else:
        print(f"verdict: {report.verdict} (threshold {depth_text(report.threshold)})")
        print(f"fitted exponent = {_float_text(report.fitted_exponent)}")
        for scale, exponent, row in zip(
            report.psi_scales, report.exponents, report.quantiles
        ):
            quantile_text = ", ".join(
                f"{_float_text(d)} -> {_float_text(q)}"
                for d, q in zip(report.delta_grid, row)
            )
            print(
                f"psi x{_float_text(scale)}: exponent {_float_text(exponent)};"
                f" quantiles {quantile_text}"
            )
    return {"supports": 0, "refutes": 3, "inconclusive": 4}[report.verdict]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threshgen",
        description="Reason about thresholded generalizations: symbolic"
        " depth queries plus Monte-Carlo model checking.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def common(sub, **kwargs):
        cmd = subparsers.add_parser(sub, **kwargs)
        cmd.add_argument("--kb", required=True, help="knowledge base file")
        cmd.add_argument(
            "--format",
            choices=("text", "kv"),
            default="text",
            help="output style: human text or machine key=value lines",
        )
        return cmd

    check = common("check", help="consistency and the exception chain")
    check.set_defaults(func=cmd_check)

    query = common("query", help="decide a query '<prop> => <prop> @ <k>'")
    query.add_argument("query")
    query.set_defaults(func=cmd_query)

    rarity = common("rarity", help="degree of rarity of a proposition")
    rarity.add_argument("proposition")
    rarity.set_defaults(func=cmd_rarity)

    depthmap = common("depthmap", help="depth of every atom")
    depthmap.set_defaults(func=cmd_depthmap)

    explain = common("explain", help="exception chain with fired rules")
    explain.set_defaults(func=cmd_explain)

    zplus = common("zplus", help="translate to or from default-rule format")
    zplus.add_argument("direction", choices=("to", "from"))
    zplus.set_defaults(func=cmd_zplus)

    validate = common(
        "validate", help="Monte-Carlo check of a query's quantile scaling"
    )
    validate.add_argument("query")
    validate.add_argument(
        "--delta-grid",
        default="0.1,0.05,0.025,0.0125",
        help="comma-separated strictly decreasing deltas",
    )
    validate.add_argument(
        "--samples", type=int, default=20000, help="models sampled per grid point"
    )
    validate.add_argument("--seed", type=int, default=0, help="sampler seed")
    validate.add_argument(
        "--eta", type=float, default=0.1, help="quantile level is 1 - eta"
    )
    validate.add_argument(
        "--psi",
        default="1",
        help="comma-separated per-rule slacks, or one value for all rules",
    )
    validate.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, NumericalError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
