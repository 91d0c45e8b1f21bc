"""JSON serialisation of A-infinity structures.

Schema::

    {"kind": "coalgebra" | "algebra", "field": "Q" | "GF(p)",
     "dims": {"<degree>": count}, "labels": {"<degree>": [str, ...]},
     "arity_bound": int,
     "ops": [{"n": int, "blocks": [{"src_degree": int,
                                     "entries": [[src, tgt, "coeff"], ...]}]}]}

Basis indices are global (ordered by degree, then position).  For a
coalgebra ``src`` is an index and ``tgt`` a list of indices (a word); for an
algebra ``src`` is a word and ``tgt`` an index.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..complexes import GradedSpace, ParseError
from ..exactla import field_from_name, FieldError
from .structures import AInftyAlgebra, AInftyCoalgebra, AInftyStructure, StructureError


def structure_to_dict(s: AInftyStructure) -> dict:
    sp = s.space
    F = s.field
    dims = {str(p): n for p, n in sorted(sp.dims.items())}
    labels = {}
    for p in sorted(sp.dims):
        labels[str(p)] = [_label_str(sp.labels[g]) for g in sp.basis(p)]
    ops = []
    for n in sorted(s.ops):
        blocks: dict[int, list] = {}
        for src, col in sorted(s.ops[n].items()):
            if isinstance(s, AInftyCoalgebra):
                p = sp.degrees[src]
                for w, c in sorted(col.items()):
                    blocks.setdefault(p, []).append([src, list(w), F.format(c)])
            else:
                p = sp.word_degree(src)
                for g, c in sorted(col.items()):
                    blocks.setdefault(p, []).append([list(src), g, F.format(c)])
        ops.append({"n": n, "blocks": [{"src_degree": p, "entries": e} for p, e in sorted(blocks.items())]})
    return {"kind": s.kind, "field": F.name, "dims": dims, "labels": labels,
            "arity_bound": s.arity_bound, "ops": ops}


def _label_str(lab) -> str:
    if isinstance(lab, tuple):
        return "[" + ",".join(map(str, lab)) + "]"
    return str(lab)


def structure_from_dict(d: dict) -> AInftyStructure:
    try:
        F = field_from_name(d.get("field", "Q"))
        kind = d.get("kind", "coalgebra")
        dims = {int(p): int(n) for p, n in d["dims"].items()}
        labels = {int(p): list(v) for p, v in d.get("labels", {}).items()}
        sp = GradedSpace.from_dims(dims, labels)
        ops: dict[int, dict] = {}
        for op in d.get("ops", []):
            n = int(op["n"])
            table = ops.setdefault(n, {})
            for block in op.get("blocks", []):
                p = int(block["src_degree"])
                for src, tgt, coeff in block["entries"]:
                    c = F.coerce(str(coeff))
                    if kind == "coalgebra":
                        src = int(src)
                        if sp.degrees[src] != p:
                            raise StructureError(f"entry source {src} is not in degree {p}")
                        key = tuple(int(x) for x in tgt)
                        col = table.setdefault(src, {})
                        col[key] = F.add(col.get(key, 0), c)
                    elif kind == "algebra":
                        key = tuple(int(x) for x in src)
                        if sp.word_degree(key) != p:
                            raise StructureError(f"entry source {key} is not in degree {p}")
                        col = table.setdefault(key, {})
                        col[int(tgt)] = F.add(col.get(int(tgt), 0), c)
                    else:
                        raise StructureError(f"unknown kind {kind!r}")
        bound = d.get("arity_bound")
        cls = AInftyCoalgebra if kind == "coalgebra" else AInftyAlgebra
        return cls(sp, ops, None if bound is None else int(bound), F)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        if isinstance(exc, (StructureError, FieldError)):
            raise
        raise ParseError(f"malformed structure JSON: {exc!r}") from None


def dumps_structure(s: AInftyStructure) -> str:
    """Stable, diff-friendly JSON: one operation entry per line."""
    d = structure_to_dict(s)
    head = {k: v for k, v in d.items() if k != "ops"}
    lines = ["{"]
    for k, v in head.items():
        lines.append(f" {json.dumps(k)}: {json.dumps(v)},")
    lines.append(' "ops": [')
    op_txt = []
    for op in d["ops"]:
        blocks = []
        for b in op["blocks"]:
            entries = ",\n".join("    " + json.dumps(e) for e in b["entries"])
            blocks.append(f'   {{"src_degree": {b["src_degree"]}, "entries": [\n{entries}\n   ]}}')
        op_txt.append(f'  {{"n": {op["n"]}, "blocks": [\n' + ",\n".join(blocks) + "\n  ]}")
    lines.append(",\n".join(op_txt))
    lines.append(" ]")
    lines.append("}")
    return "\n".join(lines)


def save_structure(s: AInftyStructure, path) -> None:
    Path(path).write_text(dumps_structure(s) + "\n", encoding="utf-8")


def load_structure(path) -> AInftyStructure:
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return structure_from_dict(d)


def load_fixture(name: str) -> AInftyStructure:
    """Load a structure shipped in ``ainfty/data`` by file stem."""
    from importlib.resources import files
    return load_structure(files("ainfty.data") / f"{name}.json")
