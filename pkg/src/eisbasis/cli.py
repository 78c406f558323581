"""Command-line front end: `eisbasis <command> [group] [options]`."""
from __future__ import annotations

import argparse
import json
import sys

from . import characters as ch
from . import checks, hecke
from .eisenstein import DomainError, SeriesCombination, g_series, spectral_basis, unnormalized_basis
from .modgroup import ParameterError, parse_group

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eisbasis", description="Eisenstein series bases on congruence subgroups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, group=True):
        if group:
            sp.add_argument("group", help="gamma:N, gamma1:N, gamma0:N, gammaNt:N,t, "
                                          "larcher:p,q,r,chi,tau or gens:N:a,b,c,d;...")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--out", help="write output to this file instead of stdout")

    for name in ("cusps", "orbits"):
        common(sub.add_parser(name, help=f"list the {name} of a group"))

    sp = sub.add_parser("basis", help="spectral or unnormalized basis of E_k(G)")
    common(sp)
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--trunc", type=int, help="number of q_N coefficients (default 30N)")
    sp.add_argument("--kind", choices=("spectral", "unnormalized"), default="spectral")

    sp = sub.add_parser("qexp", help="q-expansion of a single series given by label")
    common(sp)
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--trunc", type=int)
    sp.add_argument("--label", required=True,
                    help="G:l1,l2 / E:l1,l2 (level-N series) or E1:/E0:/G1:/G0: orbital sums")

    sp = sub.add_parser("hecke", help="apply a diamond or Hecke operator to a label")
    common(sp)
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--label", required=True, help="E1:l1,l2 or E0:a,b (also G1/G0)")
    sp.add_argument("--p", type=int, help="prime for T_p")
    sp.add_argument("--d", type=int, help="unit for the diamond operator <d>")
    sp.add_argument("--verify", action="store_true", help="also compare with T_p on q-expansions")
    sp.add_argument("--trunc", type=int, help="q-coefficients used by --verify (default 6p)")

    sp = sub.add_parser("neben", help="nebentypus basis of E_k(N, chi)")
    common(sp, group=False)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--char", default="0", help="character index, or angles at the generators")
    sp.add_argument("--weight", type=int, help="required unless --list-chars")
    sp.add_argument("--trunc", type=int)
    sp.add_argument("--list-chars", action="store_true", help="only list the characters mod N")

    sp = sub.add_parser("selfcheck", help="run the invariant suite")
    common(sp, group=False)
    sp.add_argument("--levels", default="1..12", help="level range A..B")
    sp.add_argument("--acceptance", action="store_true",
                    help="run the ten acceptance checks at their fixed sizes instead")
    return p


def _levels(text: str) -> tuple[int, int]:
    a, sep, b = text.partition("..")
    try:
        lo, hi = int(a), int(b if sep else a)
    except ValueError:
        raise UsageError(f"bad level range {text!r}; expected A..B") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"bad level range {text!r}")
    return lo, hi


def _group(text):
    try:
        return parse_group(text)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad label {text!r}") from None
    return a, b


# -- commands ---------------------------------------------------------------------------

def cmd_cusps(args):
    G = _group(args.group)
    data = {"group": G.spec, "level": G.level, "index_image": len(G.elements),
            "contains_minus_identity": G.contains_minus_id,
            "cusps": [c.to_json() for c in G.cusps]}
    lines = [f"{G.spec}: {len(G.cusps)} cusps"]
    for c in G.cusps:
        lines.append(f"  {c.label:>8}  amplitude {c.amplitude}  "
                     f"{'regular' if c.regular else 'irregular'}  orbit size {c.orbit_size}")
    return data, "\n".join(lines)


def cmd_orbits(args):
    G = _group(args.group)
    data = {"group": G.spec, "level": G.level, "orbits": [o.to_json() for o in G.orbits]}
    lines = [f"{G.spec}: {len(G.orbits)} orbits on Lambda_{G.level}"]
    for o in G.orbits:
        pts = " ".join(f"({a},{b})" for a, b in sorted(o.points))
        lines.append(f"  {'R' if o.regular else 'I'} {pts}")
    return data, "\n".join(lines)


def cmd_basis(args):
    G = _group(args.group)
    J = args.trunc if args.trunc is not None else None
    build = spectral_basis if args.kind == "spectral" else unnormalized_basis
    B = build(G, args.weight, J=J)
    lines = [f"{args.kind} basis of E_{args.weight}({G.spec}): dimension {len(B)}"]
    for e in B.elements:
        head = f"[{e.cusp.label}]"
        if e.partner is not None:
            head += f" minus {e.ratio} * [{e.partner.label}]"
        lines.append(f"{head}\n  {e.qexp.render()}")
    return B.to_json(), "\n".join(lines)


def cmd_qexp(args):
    G = _group(args.group)
    N, k = G.level, args.weight
    if k < 2:
        raise DomainError("weight must be at least 2")
    J = args.trunc if args.trunc is not None else 30 * N
    kind, _, rest = args.label.partition(":")
    if kind in ("G", "E"):
        pt = _pair(rest)
        if kind == "G":
            q = g_series(pt, N, k, J)
        else:
            q = SeriesCombination("E", N, k, {pt: 1}).qexp(J)
    else:
        try:
            q = hecke.single(args.label, N, k).qexp(J)
        except (ParameterError, ValueError) as exc:
            raise UsageError(str(exc)) from None
    data = {"group": G.spec, "label": args.label, "weight": k, "qexp": q.to_json()}
    return data, q.render()


def cmd_hecke(args):
    G = _group(args.group)
    N, k = G.level, args.weight
    try:
        comb = hecke.single(args.label, N, k)
    except (ParameterError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if (args.p is None) == (args.d is None):
        raise UsageError("give exactly one of --p and --d")
    if args.p is not None:
        img = hecke.tp_label(args.p, comb)
        op = f"T_{args.p}"
    else:
        img = hecke.diamond(args.d, comb)
        op = f"<{args.d}>"
    data = {"group": G.spec, "weight": k, "operator": op, "input": comb.to_json(),
            "image": img.to_json(), "integral": img.is_integral()}
    lines = [f"{op} {args.label} = " + " + ".join(
        f"{t['coeff']}*{t['label']}" for t in img.to_json()) if img.terms else f"{op} {args.label} = 0"]
    if args.verify and args.p is not None:
        J = args.trunc or 6 * args.p
        f = comb.qexp(J * args.p, qden=1)
        g = hecke.diamond(args.p, comb).qexp(J * args.p, qden=1)
        want = hecke.tp_qexp(f, args.p, k, diamond_image=g)
        got = img.qexp(J, qden=1)
        ok = got == want
        data["verified"] = ok
        data["verified_coefficients"] = J + 1
        lines.append(f"q-expansion check to q^{J}: {'ok' if ok else 'MISMATCH'}")
        if not ok:
            raise InvariantViolation(data, "\n".join(lines))
    return data, "\n".join(lines)


def cmd_neben(args):
    N, k = args.level, args.weight
    if N < 3:
        raise UsageError("nebentypus bases need level >= 3")
    if args.list_chars:
        chars = ch.enumerate_characters(N)
        data = {"level": N, "characters": [c.to_json() for c in chars]}
        lines = [f"#{c.index}: angles {[str(a) for a in c.to_json()['generator_angles']]} "
                 f"parity {c.parity:+d} order {c.order}" for c in chars]
        return data, "\n".join(lines)
    if k is None:
        raise UsageError("--weight is required")
    try:
        chi = ch.character_from_spec(N, args.char)
    except (ParameterError, ValueError, StopIteration) as exc:
        raise UsageError(f"bad character {args.char!r}: {exc}") from None
    if k == 2 and chi.is_trivial():
        raise DomainError("weight 2 with trivial character: use `basis gamma0:N --weight 2`")
    B = ch.nebentypus_basis(N, chi, k, J=args.trunc)
    lines = [f"E_{k}({N}, chi#{chi.index}): dimension {len(B)}"]
    for lab, q in zip(B.labels, B.qexps or []):
        lines.append(f"[E0:{lab[0]},{lab[1]}]\n  {q.render()}")
    return B.to_json(), "\n".join(lines)


def cmd_selfcheck(args):
    if args.acceptance:
        results = checks.acceptance()
    else:
        lo, hi = _levels(args.levels)
        results = checks.selfcheck(lo, hi)
    data = {"results": [r.to_json() for r in results],
            "passed": all(r.passed for r in results)}
    text = "\n".join(r.line() for r in results)
    if not data["passed"]:
        raise InvariantViolation(data, text)
    return data, text


class InvariantViolation(Exception):
    def __init__(self, data, text):
        super().__init__(text)
        self.data, self.text = data, text


COMMANDS = {"cusps": cmd_cusps, "orbits": cmd_orbits, "basis": cmd_basis, "qexp": cmd_qexp,
            "hecke": cmd_hecke, "neben": cmd_neben, "selfcheck": cmd_selfcheck}


def _emit(args, data, text):
    if args.format == "json":
        out = json.dumps(data, sort_keys=True, indent=2) + "\n"
    else:
        out = text + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        try:
            sys.stdout.write(out)
            sys.stdout.flush()
        except BrokenPipeError:
            # downstream closed early (e.g. `| head`); not an error for us
            sys.stdout = None


def main(argv=None) -> int:
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        data, text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"eisbasis: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        _emit(args, exc.data, exc.text)
        print("eisbasis: invariant violation", file=sys.stderr)
        return EXIT_INVARIANT
    except (DomainError, ParameterError) as exc:
        print(f"eisbasis: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except AssertionError as exc:
        print(f"eisbasis: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    _emit(args, data, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
