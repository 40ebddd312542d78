"""Standard diagrams with initial walls ``(1+tx)^mu`` and ``(1+ty)^nu``."""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from gmpy2 import mpq

from .diagram import Diagram, Wall, complete
from .series import Truncation, format_rational, is_primitive, primitive_part

__all__ = [
    "TABLE_SCHEMA",
    "CACHE_ENV",
    "CacheCorruptionError",
    "CoefficientTable",
    "TableCache",
    "standard_diagram",
    "coefficients",
    "multi_param_names",
    "multi_param_standard",
    "default_cache",
]

TABLE_SCHEMA = "scattering.table/1"
CACHE_ENV = "SCATTERING_CACHE"
FIRST_QUADRANT = ((1, 0), (0, 1))


class CacheCorruptionError(ValueError):
    """A cache file failed its checksum or schema check."""


def _initial(ring: Truncation, x_factors, y_factors) -> Diagram:
    x, y = ring.x, ring.y
    log_x = ring.zero()
    for t in x_factors:
        log_x = log_x + (1 + t * x).log()
    log_y = ring.zero()
    for t in y_factors:
        log_y = log_y + (1 + t * y).log()
    return Diagram(ring, [Wall((1, 0), log_x, True), Wall((0, 1), log_y, True)])


def _build_standard(mu: int, nu: int, order: int) -> Diagram:
    if mu < 0 or nu < 0:
        raise ValueError("mu and nu must be non-negative")
    if order < 1:
        raise ValueError("order must be at least 1")
    ring = Truncation(("t",), order)
    t = ring.param("t")
    start = Diagram(ring, [
        Wall((1, 0), (1 + t * ring.x).log().scale(mu), True),
        Wall((0, 1), (1 + t * ring.y).log().scale(nu), True),
    ])
    return complete(start, cone=FIRST_QUADRANT)


@dataclass
class CoefficientTable:
    """``(a, b) -> c_{a,b}`` for ``a, b >= 1`` and ``a + b <= order``."""

    mu: int
    nu: int
    order: int
    entries: dict = field(default_factory=dict)
    diagram: Diagram | None = field(default=None, repr=False, compare=False)

    @classmethod
    def from_diagram(cls, mu: int, nu: int, diagram: Diagram) -> "CoefficientTable":
        entries = {}
        for w in diagram.rays():
            a0, b0 = w.direction
            for k, c in w.factorized().exponents.items():
                entries[(k * a0, k * b0)] = c
        for key, c in entries.items():
            if c < 0 or c.denominator != 1:
                raise ArithmeticError(f"standard coefficient at {key} is {c}, not a non-negative integer")
        return cls(mu, nu, diagram.order, dict(sorted(entries.items())), diagram)

    def __getitem__(self, ab: tuple[int, int]) -> mpq:
        a, b = ab
        if a < 1 or b < 1:
            raise KeyError(f"{ab} is not in the open first quadrant")
        if a + b > self.order:
            raise KeyError(f"{ab} is beyond order {self.order}")
        return self.entries.get((a, b), mpq(0))

    def get(self, a: int, b: int) -> mpq:
        return self[(a, b)]

    def keys(self):
        """All ``(a, b)`` with ``a, b >= 1`` and ``a + b <= order``."""
        return [(a, s - a) for s in range(2, self.order + 1) for a in range(1, s)]

    def nonzero(self) -> dict:
        return dict(self.entries)

    def exponents(self, direction: tuple[int, int]) -> dict[int, mpq]:
        """Factor exponents ``k -> c_{k*direction}`` along a primitive direction."""
        a0, b0 = direction
        if not is_primitive(a0, b0):
            raise ValueError(f"direction {direction} is not primitive")
        return {k: self.entries[(k * a0, k * b0)] for k in range(1, self.order + 1)
                if (k * a0, k * b0) in self.entries}

    def scattered_directions(self) -> list[tuple[int, int]]:
        return sorted({primitive_part(a, b)[0] for a, b in self.entries})

    def restrict(self, order: int) -> "CoefficientTable":
        if order > self.order:
            raise ValueError("cannot restrict to a higher order")
        diagram = None if self.diagram is None else self.diagram.with_ring(Truncation(("t",), order))
        entries = {k: v for k, v in self.entries.items() if sum(k) <= order}
        return CoefficientTable(self.mu, self.nu, order, entries, diagram)

    def to_dict(self) -> dict:
        return {
            "schema": TABLE_SCHEMA,
            "mu": self.mu,
            "nu": self.nu,
            "order": self.order,
            "entries": [[a, b, format_rational(c)] for (a, b), c in self.entries.items()],
        }


def standard_diagram(mu: int, nu: int, order: int, cache: "TableCache | None" = None) -> Diagram:
    """Completed standard diagram ``D^{mu,nu}`` to parameter order ``order``."""
    cache = default_cache() if cache is None else cache
    return cache.diagram(mu, nu, order)


def coefficients(mu: int, nu: int, order: int, cache: "TableCache | None" = None) -> CoefficientTable:
    cache = default_cache() if cache is None else cache
    return cache.table(mu, nu, order)


def multi_param_names(mu: int, nu: int) -> tuple[str, ...]:
    return tuple(f"t[1,{j}]" for j in range(1, mu + 1)) + tuple(f"t[2,{j}]" for j in range(1, nu + 1))


def multi_param_standard(mu: int, nu: int, order: int, caps=None) -> Diagram:
    """Completed diagram for ``prod_j (1+t[1,j] x)`` and ``prod_j (1+t[2,j] y)``.

    ``caps`` optionally bounds each parameter's exponent (one entry per
    parameter, x-side first); the resulting quotient still computes every
    coefficient whose parameter profile fits under the caps.
    """
    names = multi_param_names(mu, nu)
    ring = Truncation(names, order, None if caps is None else tuple(caps))
    params = [ring.param(n) for n in names]
    start = _initial(ring, params[:mu], params[mu:])
    return complete(start, cone=FIRST_QUADRANT)


def _checksum(payload: Mapping) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


class TableCache:
    """Completed standard diagrams keyed by ``(mu, nu)``, reused at lower orders.

    With a ``directory`` every newly computed diagram is also written as one
    JSON file per ``(mu, nu, order)`` carrying a sha256 checksum.
    """

    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = None if directory is None else Path(directory)
        self._memory: dict[tuple[int, int], Diagram] = {}
        self._tables: dict[tuple[int, int, int], CoefficientTable] = {}
        self._locks: dict[tuple[int, int], threading.Lock] = {}
        self._guard = threading.Lock()

    def _lock(self, key) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(key, threading.Lock())

    def _path(self, mu: int, nu: int, order: int) -> Path:
        return self.directory / f"standard_{mu}_{nu}_N{order}.json"

    def _load_disk(self, mu: int, nu: int, order: int) -> Diagram | None:
        if self.directory is None or not self.directory.is_dir():
            return None
        best = None
        for path in self.directory.glob(f"standard_{mu}_{nu}_N*.json"):
            try:
                n = int(path.stem.rsplit("N", 1)[1])
            except ValueError:
                continue
            if n >= order and (best is None or n < best[0]):
                best = (n, path)
        if best is None:
            return None
        return self.read_file(best[1], mu, nu)

    @staticmethod
    def read_file(path: Path, mu: int | None = None, nu: int | None = None) -> Diagram:
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CacheCorruptionError(f"unreadable cache file {path}: {exc}") from exc
        if doc.get("schema") != TABLE_SCHEMA or "diagram" not in doc:
            raise CacheCorruptionError(f"cache file {path} has an unknown schema")
        if _checksum(doc["diagram"]) != doc.get("checksum"):
            raise CacheCorruptionError(f"checksum mismatch in cache file {path}")
        if mu is not None and (doc.get("mu"), doc.get("nu")) != (mu, nu):
            raise CacheCorruptionError(f"cache file {path} holds a different (mu, nu)")
        return Diagram.from_dict(doc["diagram"])

    def _store_disk(self, mu: int, nu: int, diagram: Diagram) -> None:
        if self.directory is None:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        payload = diagram.to_dict()
        doc = {"schema": TABLE_SCHEMA, "mu": mu, "nu": nu, "order": diagram.order,
               "diagram": payload, "checksum": _checksum(payload)}
        path = self._path(mu, nu, diagram.order)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(doc, sort_keys=True))
        tmp.replace(path)

    def diagram(self, mu: int, nu: int, order: int) -> Diagram:
        with self._lock((mu, nu)):
            have = self._memory.get((mu, nu))
            if have is None or have.order < order:
                disk = self._load_disk(mu, nu, order)
                if disk is not None:
                    have = disk
                else:
                    have = _build_standard(mu, nu, order)
                    self._store_disk(mu, nu, have)
                self._memory[(mu, nu)] = have
        if have.order == order:
            return have
        return have.with_ring(Truncation(("t",), order))

    def table(self, mu: int, nu: int, order: int) -> CoefficientTable:
        key = (mu, nu, order)
        if key not in self._tables:
            self._tables[key] = CoefficientTable.from_diagram(mu, nu, self.diagram(mu, nu, order))
        return self._tables[key]

    def cached(self) -> list[tuple[int, int, int]]:
        """``(mu, nu, order)`` of every diagram held in memory or on disk."""
        seen = {(mu, nu, d.order) for (mu, nu), d in self._memory.items()}
        if self.directory is not None and self.directory.is_dir():
            for path in self.directory.glob("standard_*_*_N*.json"):
                try:
                    _, mu, nu, n = path.stem.split("_")
                    seen.add((int(mu), int(nu), int(n[1:])))
                except ValueError:
                    continue
        return sorted(seen)

    def clear(self) -> None:
        self._memory.clear()
        self._tables.clear()


_DEFAULT: TableCache | None = None


def default_cache() -> TableCache:
    """Process-wide cache; persisted when the environment variable is set."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = TableCache(os.environ.get(CACHE_ENV) or None)
    return _DEFAULT
