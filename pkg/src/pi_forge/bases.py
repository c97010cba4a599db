"""Generator sets stored as JSON data files."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .free import Mode, Polynomial, parse_generic

BUNDLED = ("thA1", "thA2", "thA3", "base_star", "base_gr_star", "ungraded_A")


@dataclass(frozen=True)
class Generator:
    label: str
    text: str
    polynomials: tuple[Polynomial, ...]


@dataclass(frozen=True)
class GeneratorSet:
    name: str
    algebra: str
    mode: Mode
    generators: tuple[Generator, ...]

    def polynomials(self) -> list[Polynomial]:
        """Every expanded polynomial; a generic generator contributes one per kind assignment."""
        return [p for g in self.generators for p in g.polynomials]


def parse_generator_set(data: dict) -> GeneratorSet:
    try:
        mode = Mode.parse(data["mode"])
        gens = []
        for item in data["generators"]:
            polys = tuple(parse_generic(item["text"], mode))
            gens.append(Generator(str(item.get("label", len(gens) + 1)), item["text"], polys))
        return GeneratorSet(data.get("name", ""), data.get("algebra", ""), mode, tuple(gens))
    except (KeyError, TypeError) as exc:
        raise ValueError("malformed generator file: missing %s" % exc) from None


def load_basis(ref: str) -> GeneratorSet:
    """Load 'bundled:NAME', a bare bundled name, or a path to a JSON file."""
    name = ref.split(":", 1)[1] if ref.startswith("bundled:") else ref
    if name in BUNDLED:
        text = resources.files("pi_forge").joinpath("data", name + ".json").read_text()
    else:
        if ref.startswith("bundled:"):
            raise FileNotFoundError("no bundled basis named %r" % name)
        text = Path(ref).read_text()
    return parse_generator_set(json.loads(text))
