"""Check results and reports (plain text or line-delimited JSON records)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS, FAIL, INFO = "pass", "fail", "info"


@dataclass
class CheckResult:
    check_id: str
    status: str
    witness: str | None = None
    detail: str = ""
    asserted: bool = True

    @property
    def ok(self):
        return self.status != FAIL or not self.asserted

    def record(self):
        return {
            "check": self.check_id,
            "status": self.status,
            "witness": self.witness,
            "detail": self.detail,
            "asserted": self.asserted,
        }


@dataclass
class Report:
    title: str = ""
    results: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)

    def add(self, check_id, passed, witness=None, detail="", asserted=True):
        status = PASS if passed else FAIL
        r = CheckResult(check_id, status, witness, detail, asserted)
        self.results.append(r)
        return r

    def info(self, check_id, detail, witness=None):
        r = CheckResult(check_id, INFO, witness, detail, asserted=False)
        self.results.append(r)
        return r

    def extend(self, other):
        self.results.extend(other.results)
        self.flags.update(other.flags)
        return self

    @property
    def ok(self):
        return all(r.ok for r in self.results)

    def failures(self):
        return [r for r in self.results if not r.ok]

    def __getitem__(self, check_id):
        for r in self.results:
            if r.check_id == check_id:
                return r
        raise KeyError(check_id)

    def text(self):
        lines = [self.title] if self.title else []
        for r in self.results:
            tag = r.status.upper() if r.asserted or r.status == INFO else f"{r.status} (not asserted)"
            line = f"[{tag}] {r.check_id}"
            if r.detail:
                line += f": {r.detail}"
            if r.witness and r.status != PASS:
                line += f"  witness: {r.witness}"
            lines.append(line)
        for name, value in self.flags.items():
            lines.append(f"{name}: {'yes' if value else 'no'}")
        lines.append(f"overall: {'ok' if self.ok else 'FAILED'}")
        return "\n".join(lines)

    def records(self):
        out = [json.dumps(r.record(), ensure_ascii=False) for r in self.results]
        for name, value in self.flags.items():
            out.append(json.dumps({"check": f"flag:{name}", "status": "yes" if value else "no"}))
        return "\n".join(out)
