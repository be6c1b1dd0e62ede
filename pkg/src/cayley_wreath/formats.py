"""JSON documents: group specs, project configs and built structures."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from . import automata as fa
from .base import BaseAutomaticStructure, build_finite_group_structure, build_integer_structure
from .groups import (FiniteGroupTable, GroupSpecError, IntegerGroup, VirtuallyZSpec,
                     audit_virtually_z)
from .wreath import ShiftEntry, WreathStructure

FORMAT = "cayley-wreath/1"


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# group specs


def group_from_dict(doc: dict):
    kind = doc.get("type")
    if kind == "finite_table":
        order = doc["order"]
        names = doc.get("names") or [str(i) for i in range(order)]
        identity = doc.get("identity", 0)
        gens = [names.index(g) if isinstance(g, str) else int(g) for g in doc["generators"]]
        return FiniteGroupTable(order, doc["mult"], doc["inverse"], identity, gens, names)
    if kind == "integer":
        return IntegerGroup(doc.get("generator", "a"))
    raise GroupSpecError(f"unknown base group type {kind!r}")


def group_to_dict(group) -> dict:
    if isinstance(group, IntegerGroup):
        return {"type": "integer", "generator": group.generator}
    return {
        "type": "finite_table",
        "order": group.order,
        "mult": [list(row) for row in group.mult],
        "inverse": list(group.inverse),
        "identity": group.identity,
        "generators": [group.names[g] for g in group.generator_indices],
        "names": list(group.names),
    }


def hspec_from_dict(doc: dict, audit_radius: int = 3) -> VirtuallyZSpec:
    if doc.get("type") != "virtually_z":
        raise GroupSpecError(f"expected a virtually_z document, got {doc.get('type')!r}")
    spec = VirtuallyZSpec(doc["m"], doc["coset_mult"], doc["t_conj"], doc["inverse"],
                          name=doc.get("name", "H"))
    audit_virtually_z(spec, audit_radius)
    return spec


def hspec_to_dict(spec: VirtuallyZSpec) -> dict:
    return {
        "type": "virtually_z",
        "name": spec.name,
        "m": spec.m,
        "coset_mult": [[list(e) for e in row] for row in spec.coset_mult],
        "t_conj": [list(e) for e in spec.t_conj],
        "inverse": [list(e) for e in spec.inverse],
    }


def base_structure_for(group) -> BaseAutomaticStructure:
    if isinstance(group, IntegerGroup):
        return build_integer_structure(group)
    return build_finite_group_structure(group)


# ---------------------------------------------------------------------------
# structures


def base_to_dict(b: BaseAutomaticStructure) -> dict:
    return {
        "group": group_to_dict(b.group),
        "alphabet": list(b.alphabet.symbols),
        "language": fa.to_dict(b.language),
        "multipliers": {name: fa.to_dict(m) for name, m in b.multipliers.items()},
    }


def base_from_dict(doc: dict) -> BaseAutomaticStructure:
    # The evaluator is code, so it is rebuilt from the group; automata come from the file.
    b = base_structure_for(group_from_dict(doc["group"]))
    if list(b.alphabet.symbols) != doc["alphabet"]:
        raise ConfigError("stored base alphabet does not match the group spec")
    return replace(b, language=fa.from_dict(doc["language"]),
                   multipliers={k: fa.from_dict(v) for k, v in doc["multipliers"].items()})


def structure_to_dict(ws: WreathStructure) -> dict:
    return {
        "format": FORMAT,
        "base": base_to_dict(ws.base),
        "hspec": hspec_to_dict(ws.hspec),
        "alphabet": list(ws.alphabet.full.symbols),
        "language": fa.to_dict(ws.language),
        "multipliers": {name: fa.to_dict(r) for name, r in ws.multipliers.items()},
        "shifts": [{"q": q, "generator": g, "k": e.k, "r": e.r, "shift": e.shift}
                   for (q, g), e in sorted(ws.shifts.items())],
    }


def structure_from_dict(doc: dict) -> WreathStructure:
    if doc.get("format") != FORMAT:
        raise ConfigError(f"not a {FORMAT} structure document")
    base = base_from_dict(doc["base"])
    hspec = hspec_from_dict(doc["hspec"])
    shifts = {(e["q"], e["generator"]): ShiftEntry(e["k"], e["r"], e["shift"])
              for e in doc["shifts"]}
    ws = WreathStructure(base, hspec, fa.from_dict(doc["language"]),
                         {k: fa.from_dict(v) for k, v in doc["multipliers"].items()}, shifts)
    if list(ws.alphabet.full.symbols) != doc["alphabet"]:
        raise ConfigError("stored alphabet does not match base alphabet plus markers")
    return ws


def save_structure(ws: WreathStructure, path: str | Path) -> None:
    Path(path).write_text(json.dumps(structure_to_dict(ws), sort_keys=True))


def load_structure(path: str | Path) -> WreathStructure:
    return structure_from_dict(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# project config


@dataclass(frozen=True)
class ProjectConfig:
    base: Path
    hspec: Path
    language_depth: int = 12
    multiplier_depth: int = 10
    window: tuple[int, int] = (-2, 2)
    output_dir: Path = Path("build")
    seed: int = 0

    def __post_init__(self):
        if self.language_depth < 1 or self.multiplier_depth < 1:
            raise ConfigError("depths must be >= 1")
        lo, hi = self.window
        if not lo <= 0 <= hi:
            raise ConfigError(f"window {self.window} must contain 0")

    @classmethod
    def load(cls, path: str | Path) -> "ProjectConfig":
        path = Path(path)
        try:
            doc = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        here = path.resolve().parent
        try:
            return cls(
                base=here / doc["base"],
                hspec=here / doc["hspec"],
                language_depth=int(doc.get("language_depth", 12)),
                multiplier_depth=int(doc.get("multiplier_depth", 10)),
                window=tuple(doc.get("window", (-2, 2))),
                output_dir=here / doc.get("output_dir", "build"),
                seed=int(doc.get("seed", 0)),
            )
        except KeyError as exc:
            raise ConfigError(f"config {path} lacks {exc}") from exc

    def load_groups(self):
        try:
            base_doc = json.loads(self.base.read_text())
            h_doc = json.loads(self.hspec.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(str(exc)) from exc
        return group_from_dict(base_doc), hspec_from_dict(h_doc)
