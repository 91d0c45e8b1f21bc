"""Command-line interface.

Exit codes: 0 success, 2 unreadable input, 3 input that violates a
requirement of the command, 4 an internal consistency check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .apersist import (
    PreconditionError, compatibility_check, delta_barcode, from_filtration, kernel_submodule_barcode,
    load_input, sleep_wake_diagnostic,
)
from .complexes import (
    DegreeError, ParseError, aw_diagonal, betti_numbers, chain_complex, cochain_complex, dump_filtration,
    load_complex, load_filtration, load_point_cloud, rips_filtration,
)
from .exactla import DimensionError, FieldError, field_from_name, using_field
from .grids import GridError, build_link_complement, link_fixture, load_link_spec
from .massey import MasseyError, link_pipeline
from .persist import Barcode, ConsistencyError, RankTableError, homology_barcode
from .plot import barcode_svg
from .transfer.cobar import cobar, cobar_d_squared_check
from .transfer.contraction import homology_contraction
from .transfer.htt import cochain_cup, transfer_algebra, transfer_coalgebra
from .transfer.io import dumps_structure, load_structure
from .transfer.structures import AInftyCoalgebra, StructureError, verify_stasheff

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_CONSISTENCY = 0, 2, 3, 4


@dataclass
class Config:
    field: str = "Q"
    arity_bound: int = 4
    degree: int | None = None
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        self.field_obj = field_from_name(self.field)
        if self.arity_bound < 2:
            raise PreconditionError("arity bound must be at least 2")
        if self.format not in ("json", "svg", "text"):
            raise PreconditionError(f"unknown format {self.format!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _emit(cfg: Config, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _records_json(records) -> str:
    return json.dumps(records, indent=1) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_barcode(args, cfg: Config) -> int:
    f = load_filtration(args.file)
    top = f.complex.dim
    if cfg.degree is not None and cfg.degree < 0:
        raise DegreeError(f"bad degree {cfg.degree}")
    degrees = [cfg.degree] if cfg.degree is not None else list(range(top + 1))
    bars = [homology_barcode(f, p) if p <= top else _empty_barcode(f, p) for p in degrees]
    if cfg.format == "svg":
        _emit(cfg, barcode_svg(bars, title=Path(args.file).name))
    elif cfg.format == "text":
        _emit(cfg, "\n".join(f"H{bc.degree}: {bc}" for bc in bars))
    else:
        _emit(cfg, _records_json([r for bc in bars for r in bc.to_records()]))
    return EXIT_OK


def _empty_barcode(f, p):
    return Barcode(max(f.N, 0), {}, degree=p)


def cmd_ainfty(args, cfg: Config) -> int:
    if args.file.endswith(".json"):
        inp = load_input(args.file)
        if args.n is not None and args.n != inp.arity:
            raise PreconditionError(f"bundle holds arity {inp.arity}, not {args.n}")
        if cfg.degree is not None and cfg.degree != inp.degree:
            raise PreconditionError(f"bundle holds degree {inp.degree}, not {cfg.degree}")
    else:
        if cfg.degree is None:
            raise PreconditionError("--degree is required for a filtration file")
        f = load_filtration(args.file)
        inp = from_filtration(f, cfg.degree, args.n or 2, basepoint=args.basepoint)
    bc = delta_barcode(inp)
    compat = compatibility_check(inp)
    flags = sleep_wake_diagnostic(inp)
    sub = kernel_submodule_barcode(inp) if compat.ok else None
    if sub is not None and sub != bc:
        raise ConsistencyError("kernel submodule barcode differs from the kernel-table barcode")
    if not compat.ok:
        _warn(f"kernels are not nested along the maps at index {compat.index}; "
              "bars may split one class into several")
    for pat in flags:
        _warn(f"class born at {pat.start} leaves the kernel and returns (support {pat.support})")
    if cfg.format == "svg":
        _emit(cfg, barcode_svg([bc], title=Path(args.file).name))
    elif cfg.format == "text":
        _emit(cfg, str(bc))
    else:
        _emit(cfg, json.dumps({
            "degree": inp.degree, "arity": inp.arity, "N": inp.N,
            "bars": bc.to_records(),
            "compatible": compat.ok,
            "pathways_agree": None if sub is None else True,
            "sleep_wake": [{"start": p.start, "support": p.support} for p in flags],
        }, indent=1) + "\n")
    return EXIT_OK


def cmd_transfer(args, cfg: Config) -> int:
    K = load_complex(args.file)
    if args.kind == "coalgebra":
        C = chain_complex(K, basepoint=args.basepoint)
        s = transfer_coalgebra(homology_contraction(C), aw_diagonal(K, C), n_max=cfg.arity_bound)
    else:
        D = cochain_complex(K, basepoint=args.basepoint)
        s = transfer_algebra(homology_contraction(D), cochain_cup(K, D), n_max=cfg.arity_bound)
    _emit(cfg, dumps_structure(s))
    return EXIT_OK


def cmd_stasheff(args, cfg: Config) -> int:
    s = load_structure(args.file)
    n_max = args.n_max if args.n_max is not None else s.arity_bound
    rep = verify_stasheff(s, n_max)
    out = {"kind": s.kind, "n_max": n_max, "ok": rep.ok, "failures": rep.failures,
           "summary": rep.summary()}
    if isinstance(s, AInftyCoalgebra):
        cb = cobar_d_squared_check(cobar(s, n_max))
        out["cobar"] = {"ok": cb.ok, "failing_lengths": cb.failing_lengths}
        if cb.ok != rep.ok:
            raise ConsistencyError("cobar check and Stasheff identities disagree")
    _emit(cfg, json.dumps(out, indent=1) + "\n")
    return EXIT_OK if rep.ok else EXIT_CONSISTENCY


def _link_spec(name: str):
    if Path(name).exists():
        return load_link_spec(name)
    try:
        return link_fixture(name)
    except FileNotFoundError:
        raise ParseError(f"no such link spec file or shipped link: {name}") from None


def cmd_massey(args, cfg: Config) -> int:
    spec = _link_spec(args.file)
    res = [args.resolution] if args.resolution else None
    rep = link_pipeline(spec, resolutions=res)
    if cfg.format == "text":
        _emit(cfg, f"{spec.name or args.file}: betti {list(rep.betti)}, cup rank {rep.cup_rank}, "
                   f"{rep.verdict}")
    else:
        _emit(cfg, rep.to_json() + "\n")
    if rep.membership is False:
        return EXIT_CONSISTENCY
    return EXIT_OK


def cmd_link_build(args, cfg: Config) -> int:
    spec = _link_spec(args.file)
    G = build_link_complement(spec, args.resolution)
    K = G.complex
    if cfg.format == "text":
        lines = [" ".join(map(str, s)) for s in K.simplices(K.dim)]
        _emit(cfg, "\n".join(lines))
    else:
        _emit(cfg, json.dumps({"name": spec.name, "resolution": G.resolution, "f_vector": list(K.f_vector),
                               "betti": list(betti_numbers(K)), "meridians": G.meridians}, indent=1) + "\n")
    return EXIT_OK


def cmd_rips(args, cfg: Config) -> int:
    pts = load_point_cloud(args.file)
    radii = [r for r in args.radii.split(",") if r.strip()]
    try:
        f = rips_filtration(pts, radii, args.max_dim)
    except (ValueError, TypeError) as exc:
        raise PreconditionError(str(exc)) from None
    if cfg.format == "text":
        _emit(cfg, dump_filtration(f))
    else:
        degrees = [cfg.degree] if cfg.degree is not None else list(range(f.complex.dim + 1))
        bars = [homology_barcode(f, p) for p in degrees]
        if cfg.format == "svg":
            _emit(cfg, barcode_svg(bars, title=Path(args.file).name))
        else:
            _emit(cfg, _records_json([r for bc in bars for r in bc.to_records()]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="Q", help='"Q" or "GF:p" (default Q)')
    common.add_argument("--format", default="json", choices=["json", "svg", "text"])
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    p = _Parser(prog="ainfty", description="Exact persistence, transferred A-infinity structures and "
                                            "Massey products.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("barcode", parents=[common], help="homology barcodes of a filtration file")
    s.add_argument("file")
    s.add_argument("--degree", type=int)
    s.set_defaults(func=cmd_barcode)

    s = sub.add_parser("ainfty", parents=[common], help="barcode of comultiplication kernels")
    s.add_argument("file", help="JSON bundle of maps and blocks, or a filtration file")
    s.add_argument("--n", type=int, help="arity of the comultiplication")
    s.add_argument("--degree", type=int)
    s.add_argument("--basepoint", type=int, help="use chains relative to this vertex (filtration input)")
    s.set_defaults(func=cmd_ainfty)

    s = sub.add_parser("transfer", parents=[common], help="transferred structure of a complex file")
    s.add_argument("file")
    s.add_argument("--n-max", type=int, default=4)
    s.add_argument("--kind", choices=["coalgebra", "algebra"], default="coalgebra")
    s.add_argument("--basepoint", type=int)
    s.set_defaults(func=cmd_transfer)

    s = sub.add_parser("stasheff", parents=[common], help="check the A-infinity identities of a structure")
    s.add_argument("file")
    s.add_argument("--n-max", type=int)
    s.set_defaults(func=cmd_stasheff)

    s = sub.add_parser("massey", parents=[common], help="link report: Betti, cup, Massey and mu_3")
    s.add_argument("file", help="link spec JSON or a shipped name (unlink2, hopf, unlink3, borromean)")
    s.add_argument("--resolution", type=int)
    s.set_defaults(func=cmd_massey)

    s = sub.add_parser("link-build", parents=[common], help="triangulate a link complement")
    s.add_argument("file")
    s.add_argument("--resolution", type=int)
    s.set_defaults(func=cmd_link_build)

    s = sub.add_parser("rips", parents=[common], help="Vietoris-Rips filtration of a CSV point cloud")
    s.add_argument("file")
    s.add_argument("--radii", required=True, help="comma-separated ascending radii, exact decimals")
    s.add_argument("--max-dim", type=int, default=2)
    s.add_argument("--degree", type=int)
    s.set_defaults(func=cmd_rips)
    return p


PARSE_ERRORS = (ParseError, FieldError, json.JSONDecodeError, FileNotFoundError, UnicodeDecodeError)
PRECONDITION_ERRORS = (PreconditionError, DegreeError, GridError, MasseyError, StructureError, DimensionError,
                       ValueError, IndexError)
CONSISTENCY_ERRORS = (ConsistencyError, RankTableError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = Config(args.field, getattr(args, "n_max", None) or 4, getattr(args, "degree", None),
                     args.out, args.format)
        with using_field(cfg.field_obj):
            return args.func(args, cfg)
    except CONSISTENCY_ERRORS as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except PARSE_ERRORS as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PRECONDITION_ERRORS as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
