"""Check reports: violations are data, not exceptions."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckItem:
    label: str
    passed: bool
    details: str = ""


@dataclass
class Report:
    items: list = field(default_factory=list)

    def add(self, label, passed, details=""):
        self.items.append(CheckItem(label, bool(passed), details))
        return passed

    def merge(self, other, prefix=""):
        for item in other.items:
            label = f"{prefix}{item.label}" if prefix else item.label
            self.items.append(CheckItem(label, item.passed, item.details))

    @property
    def passed(self):
        return all(item.passed for item in self.items)

    @property
    def first_failure(self):
        for item in self.items:
            if not item.passed:
                return item
        return None

    def failures(self):
        return [item for item in self.items if not item.passed]

    def summary(self):
        n_fail = len(self.failures())
        head = "pass" if n_fail == 0 else "FAIL"
        return f"{head}: {len(self.items) - n_fail}/{len(self.items)} checks"

    def lines(self):
        out = [self.summary()]
        for item in self.failures():
            txt = f"  FAIL {item.label}"
            if item.details:
                txt += f": {item.details}"
            out.append(txt)
        return out

    def __str__(self):
        return "\n".join(self.lines())
