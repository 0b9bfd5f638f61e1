"""Command-line front end.

Exit status: 0 on success, 1 for domain errors (inadmissible or null pair,
non-member decimal), 2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from fractions import Fraction

from . import poly as P
from .admissible import (NoFiniteSetError, NotAdmissibleError, Variant, build_automaton,
                         check_admissible, count_prefixes, derive_forbidden_set, find_violation,
                         growth_rate, is_null, spectral_radius)
from .binstr import ParseError, parse_decimal, parse_epstring
from .numeric import AlgebraicReal, FieldElement, NoBaseError, solve_base
from .radix import (NotMemberError, NullPairError, RadixError, build, decode, encode,
                    pair_from_base, radix_value)
from .tiling import (derive_substitution, generate_tiling, in_powers_of_B, tile_lengths,
                     tiling_json, tiling_svg, verify_self_replicating)

SCHEMA = "radix/1"


class DomainError(Exception):
    pass


class UsageError(Exception):
    pass


def precision() -> int:
    raw = os.environ.get("RADIX_PRECISION", "40")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"RADIX_PRECISION must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("RADIX_PRECISION must be positive")
    return value


def fixed(x, places: int) -> str:
    """``x`` rounded to ``places`` decimals (exact interval refinement)."""
    if isinstance(x, FieldElement):
        lo, hi = x.interval(Fraction(1, 10 ** (places + 3)))
    else:
        x.refine_to(Fraction(1, 10 ** (places + 3)))
        lo, hi = x.lo, x.hi
    mid = (lo + hi) / 2
    n = round(mid * 10**places)
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def parse_number(text: str) -> Fraction:
    """``p/q``, an integer or a decimal fraction; floats warn."""
    t = text.strip()
    try:
        if "/" in t or t.lstrip("+-").isdigit():
            return Fraction(t)
        value = float(t)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse number {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"number must be finite, got {text!r}")
    warnings.warn(f"float input {text!r} converted to the rational {Fraction(t)}", stacklevel=2)
    return Fraction(t)


def _pair(args):
    try:
        alpha, beta = parse_epstring(args.alpha), parse_epstring(args.beta)
    except ParseError as e:
        raise UsageError(str(e)) from None
    try:
        return check_admissible(alpha, beta)
    except NotAdmissibleError as e:
        raise DomainError(f"not admissible: {e}") from None


def _system(args, variant=None):
    pair = _pair(args)
    v = variant if variant is not None else Variant.parse(getattr(args, "variant", "-"))
    try:
        return build(pair, v)
    except RadixError as e:
        raise DomainError(str(e)) from None


def _real(x: AlgebraicReal, digits: int) -> dict:
    lo, hi = x.display_interval()
    return {"poly": P.to_str(x.poly), "interval": [str(lo), str(hi)], "value": x.to_float(digits)}


def _value(x: FieldElement, digits: int) -> dict:
    return {"exact": str(x), "value": x.to_float(digits), "rational": x.is_rational}


# subcommands -----------------------------------------------------------------

def cmd_check(args):
    try:
        alpha, beta = parse_epstring(args.alpha), parse_epstring(args.beta)
    except ParseError as e:
        raise UsageError(str(e)) from None
    v = find_violation(alpha, beta)
    data = {"alpha": str(alpha), "beta": str(beta), "admissible": v is None,
            "violation": None if v is None else
            {"n": v.n, "which": v.which, "condition": v.condition, "detail": v.detail}}
    text = "admissible" if v is None else f"not admissible: {v.detail} (condition {v.condition})"
    return (0 if v is None else 1), data, text


def cmd_base(args):
    pair = _pair(args)
    try:
        sol = solve_base(pair)
    except NoBaseError as e:
        raise DomainError(f"null pair: {e}") from None
    digits = precision()
    B = sol.B
    data = {"alpha": str(pair.alpha), "beta": str(pair.beta), "equation": P.to_str(sol.equation),
            "b": _real(sol.b, digits), "B": _real(B, digits)}
    text = (f"b: root of {P.to_str(sol.b.poly)} ≈ {fixed(sol.b, 4)}, B ≈ {fixed(B, 4)}\n"
            f"B: root of {P.to_str(B.poly)}")
    return 0, data, text


def cmd_forbidden(args):
    pair = _pair(args)
    try:
        fs = derive_forbidden_set(pair, args.maxlen)
    except NoFiniteSetError as e:
        data = {"alpha": str(pair.alpha), "beta": str(pair.beta), "finite": False,
                "family": e.family, "witness": e.witness, "message": str(e)}
        text = f"no finite forbidden set: {e}"
        return 0, data, text
    data = {"alpha": str(pair.alpha), "beta": str(pair.beta), "finite": True,
            "words": list(fs.words), "verified_to": fs.verified_to}
    return 0, data, str(fs)


def cmd_growth(args):
    pair = _pair(args)
    aut = build_automaton(pair, Variant.MINUS)
    dec = build_automaton(pair, Variant.MINUS, leading_zero=True)
    n = args.n
    counts = [count_prefixes(aut, k) for k in range(1, n + 1)]
    dcounts = [count_prefixes(dec, k) for k in range(1, n + 1)]
    rho = spectral_radius(aut)
    digits = precision()
    rate = growth_rate(aut)
    at_n = math.log(counts[-1]) / n if counts and counts[-1] > 0 else 0.0
    null = is_null(pair)
    data = {"alpha": str(pair.alpha), "beta": str(pair.beta), "n": n,
            "counts": [str(c) for c in counts], "decimal_counts": [str(c) for c in dcounts],
            "spectral_radius": _real(rho, digits), "growth_rate": f"{rate:.12f}",
            "rate_at_n": f"{at_n:.12f}", "null": null, "states": aut.size}
    lines = ["n  |Gamma_n|  decimals"]
    lines += [f"{k}  {c}  {d}" for k, (c, d) in enumerate(zip(counts, dcounts), start=1)]
    lines.append(f"spectral radius: root of {P.to_str(rho.poly)} ≈ {rho.to_float(12)}")
    lines.append(f"growth rate: {rate:.12f}")
    lines.append(f"ln|Gamma_{n}|/{n}: {at_n:.12f}")
    lines.append("null" if null else "non-null")
    return 0, data, "\n".join(lines)


def cmd_encode(args):
    sys_ = _system(args)
    x = parse_number(args.x)
    if x < 0:
        raise DomainError("negative numbers have no expansion")
    r = encode(sys_, x, digits=args.digits, exact=not args.truncate, max_steps=args.max_steps)
    data = {"alpha": str(sys_.pair.alpha), "beta": str(sys_.pair.beta), "variant": str(sys_.variant),
            "x": str(x), "truncated": r.truncated}
    if r.truncated:
        data["text"], data["prefix"], data["point"] = str(r), r.prefix, r.point
    else:
        data["decimal"] = str(r)
    return 0, data, str(r)


def cmd_decode(args):
    sys_ = _system(args)
    try:
        d = parse_decimal(args.decimal)
    except ParseError as e:
        raise UsageError(str(e)) from None
    try:
        v = radix_value(sys_, d, check=not args.no_check)
    except NotMemberError as e:
        raise DomainError(str(e)) from None
    digits = precision()
    data = {"alpha": str(sys_.pair.alpha), "beta": str(sys_.pair.beta), "variant": str(sys_.variant),
            "decimal": str(d), **_value(v, digits)}
    text = f"{v} ≈ {v.to_float(digits)}" if not v.is_rational else str(v)
    return 0, data, text


def _parse_interval(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"interval must be 'lo,hi', got {text!r}")
    return parse_number(parts[0]), parse_number(parts[1])


def cmd_pair_from_base(args):
    from .radix import base_field

    try:
        poly = P.parse_poly(args.poly)
    except ValueError as e:
        raise UsageError(str(e)) from None
    lo, hi = _parse_interval(args.interval)
    if P.count_roots_closed(P.squarefree(poly), lo, hi) != 1:
        raise UsageError(f"{args.poly} must have exactly one root in [{lo}, {hi}]")
    field, B = base_field(poly, lo, hi)
    if "x" in args.p:
        try:
            p_poly = P.parse_poly(args.p)
        except ValueError as e:
            raise UsageError(str(e)) from None
        p = P.evaluate(p_poly, B) if p_poly else field.zero
        p = field(p) if not isinstance(p, FieldElement) else p
    else:
        p = field(parse_number(args.p))
    try:
        res = pair_from_base(B, p, args.max_steps)
    except RadixError as e:
        raise DomainError(str(e)) from None
    data = {"B": B.to_float(precision()), "p": str(p), "alpha": str(res.alpha), "beta": str(res.beta),
            "truncated": res.truncated, "admissible": res.pair is not None}
    lines = [f"alpha_p = {res.alpha}", f"beta_p = {res.beta}"]
    if res.truncated:
        lines.append(f"orbit not closed within {args.max_steps} steps")
    elif res.pair is None:
        lines.append(f"not admissible: {res.violation}")
    else:
        try:
            sol = solve_base(res.pair)
            same = sol.B.cmp(B.to_algebraic()) == 0
        except NoBaseError:
            same = False
        data["base_matches"] = same
        lines.append("base recovered exactly" if same else "base differs")
    return 0, data, "\n".join(lines)


def cmd_tiling(args):
    sys_ = _system(args, Variant.MINUS)
    tiling = generate_tiling(sys_, args.count)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(tiling_svg(tiling))
    lengths = tile_lengths(sys_, tiling)
    names = tiling.names()
    rel = [in_powers_of_B(sys_, r) for r in lengths.relative]
    digits = precision()
    data = {"alpha": str(sys_.pair.alpha), "beta": str(sys_.pair.beta), "count": args.count,
            "tiles": tiling_json(tiling, min(digits, 20)),
            "types": [{"name": names[i], "length": str(v), "relative": rel[i], "count": lengths.counts[i]}
                      for i, v in enumerate(lengths.lengths)],
            "type_sequence": tiling.type_string(),
            "lengths_are_candidates": lengths.all_candidates()}
    lines = [f"{t.label}\t[{t.lo}, {t.hi}]\t{names[t.type_id]}" for t in tiling.tiles]
    lines.append("types: " + ", ".join(f"{names[i]} = {rel[i]} (x{lengths.counts[i]})"
                                      for i in range(len(rel))))
    lines.append("sequence: " + tiling.type_string())
    return 0, data, "\n".join(lines)


def cmd_subst(args):
    sys_ = _system(args, Variant.MINUS)
    subst = derive_substitution(sys_, args.sample)
    tiling = generate_tiling(sys_, args.count)
    ok = verify_self_replicating(sys_, tiling)
    rel = [in_powers_of_B(sys_, v / subst.lengths[0]) for v in subst.lengths]
    data = {"alpha": str(sys_.pair.alpha), "beta": str(sys_.pair.beta),
            "rules": subst.rule_strings(), "axiom": subst.names[subst.axiom],
            "types": [{"name": n, "relative": r} for n, r in zip(subst.names, rel)],
            "self_replicating": ok, "tiles_checked": args.count}
    lines = subst.rule_strings()
    lines.append("lengths: " + ", ".join(f"{n} = {r}" for n, r in zip(subst.names, rel)))
    lines.append(f"self-replicating on {args.count} tiles: {'yes' if ok else 'no'}")
    return 0, data, "\n".join(lines)


# parser ---------------------------------------------------------------------

def _variant(text: str) -> str:
    try:
        Variant.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="binradix", description="Binary radix systems from admissible pairs.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_pair(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("alpha")
        p.add_argument("beta")
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    with_pair("check", cmd_check, "admissibility verdict")
    with_pair("base", cmd_base, "base b and B")
    p = with_pair("forbidden", cmd_forbidden, "forbidden factors of the decimals")
    p.add_argument("--maxlen", type=int, default=40)
    p = with_pair("growth", cmd_growth, "prefix counts, growth rate, nullity")
    p.add_argument("--n", type=int, default=12)
    p = with_pair("encode", cmd_encode, "digit expansion of a number")
    p.add_argument("x")
    p.add_argument("--variant", type=_variant, default="-")
    p.add_argument("--digits", type=int, default=64, help="bits after the point in truncated output")
    p.add_argument("--max-steps", type=int, default=4096)
    p.add_argument("--truncate", action="store_true", help="skip orbit closure, print digits only")
    p = with_pair("decode", cmd_decode, "value of a decimal")
    p.add_argument("decimal")
    p.add_argument("--variant", type=_variant, default="-")
    p.add_argument("--no-check", action="store_true", help="skip the membership check")
    p = sub.add_parser("pair-from-base", help="pair from a base B and partition point p")
    p.add_argument("--poly", required=True, help="polynomial in x with root B")
    p.add_argument("--interval", required=True, help="lo,hi isolating B")
    p.add_argument("--p", required=True, help="p as a rational or a polynomial in x = B")
    p.add_argument("--max-steps", type=int, default=4096)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_pair_from_base)
    p = with_pair("tiling", cmd_tiling, "tiles of the half-line")
    p.add_argument("--count", type=int, default=22)
    p.add_argument("--svg", metavar="FILE")
    p = with_pair("subst", cmd_subst, "substitution rules")
    p.add_argument("--sample", type=int, default=200)
    p.add_argument("--count", type=int, default=100)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            code, data, text = args.func(args)
        except UsageError as e:
            print(f"error: {e}", file=err)
            return 2
        except (DomainError, NotAdmissibleError, NullPairError, NotMemberError) as e:
            if args.json:
                print(json.dumps({"schema": SCHEMA, "command": args.command, "error": str(e)},
                                 sort_keys=True, ensure_ascii=False), file=out)
            print(f"error: {e}", file=err)
            return 1
    for w in caught:
        print(f"warning: {w.message}", file=err)
    if args.json:
        payload = {"schema": SCHEMA, "command": args.command, **data}
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False), file=out)
    else:
        print(text, file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
