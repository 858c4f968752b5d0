"""JSON reports produced by the command line tool."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from lcs.algebra import Witness
from lcs.confmap import ConformalMap
from lcs.element import Element
from lcs.poly import Poly

SCHEMA_VERSION = 1


def to_jsonable(x):
    """Rationals become strings like ``"3/2"``; elements and polynomials their rendered text."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str, float)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (Element, Poly)):
        return x.render()
    if isinstance(x, ConformalMap):
        return {"parity": x.parity, "values": x.render()}
    if isinstance(x, Witness):
        return {"kind": x.kind, "generators": list(x.generators), "residual": x.residual.render()}
    if isinstance(x, dict):
        return {(k if isinstance(k, str) else ",".join(map(str, k)) if isinstance(k, tuple) else str(k)):
                to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in x]
    return str(x)


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)  # name -> bool
    witnesses: list = field(default_factory=list)
    bases: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    text: str | None = None  # plain output replacing the summary
    started: float = field(default_factory=time.perf_counter)
    elapsed: float | None = None

    def check(self, name: str, ok: bool) -> bool:
        self.checks[name] = bool(ok)
        return bool(ok)

    def finish(self) -> Report:
        self.elapsed = time.perf_counter() - self.started
        return self

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        if self.elapsed is None:
            self.finish()
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": to_jsonable(self.inputs),
            "checks": dict(self.checks),
            "witnesses": to_jsonable(self.witnesses),
            "bases": to_jsonable(self.bases),
            "timing": {"seconds": round(self.elapsed, 6)},
            "ok": self.ok,
        }
        if self.info:
            out["info"] = to_jsonable(self.info)
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=False)

    def summary(self) -> str:
        lines = [f"{self.command}: {'ok' if self.ok else 'FAILED'}"]
        for k, v in to_jsonable(self.info).items():
            if isinstance(v, str) and "\n" in v:
                lines.append(f"  {k}:")
                lines += ["    " + line for line in v.splitlines()]
            else:
                lines.append(f"  {k}: {v}")
        for name, ok in self.checks.items():
            lines.append(f"  [{'pass' if ok else 'FAIL'}] {name}")
        for name, basis in to_jsonable(self.bases).items():
            lines.append(f"  {name}: {len(basis)} element(s)")
            for b in basis:
                lines.append(f"    {b}")
        for w in to_jsonable(self.witnesses)[:10]:
            lines.append(f"  witness: {w}")
        if len(self.witnesses) > 10:
            lines.append(f"  ... {len(self.witnesses) - 10} more witness(es)")
        return "\n".join(lines)
