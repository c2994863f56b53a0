"""The fundamental chain: integer indices with a downward shift.

Index ``i`` stands for the fundamental monomial phi_i; ``i < j`` means phi_i is
strictly dominated by phi_j.  The decreasing automorphism moves every index
down by ``step``.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Chain:
    step: int = 1
    labels: str = "logexp"

    def __post_init__(self):
        if self.step < 1:
            raise ValueError("chain step must be a positive integer")
        if self.labels not in ("logexp", "indexed"):
            raise ValueError(f"unknown label scheme {self.labels!r}")

    def sigma(self, i, k=1):
        return i - k * self.step

    def orbit_rep(self, i):
        return i % self.step

    def same_orbit(self, i, j):
        return (i - j) % self.step == 0

    def fundamental_domain(self):
        return range(self.step)

    def in_convex_orbit(self, i, j):
        # every index lies between two shifts of any other one
        return True

    def label(self, i):
        if self.labels == "indexed":
            return f"phi[{i}]"
        if i == 0:
            return "x"
        name = "exp" if i > 0 else "log"
        n = abs(i)
        return f"{name}(" * n + "x" + ")" * n

    @property
    def name(self):
        if self.step == 1 and self.labels == "logexp":
            return "logexp"
        return f"interleaved({self.step})"


LOGEXP = Chain(1, "logexp")


def interleaved(n):
    return Chain(n, "indexed")


def preset(name, step=None):
    if name == "logexp":
        return LOGEXP
    if name == "interleaved":
        return interleaved(step or 2)
    if name.startswith("interleaved(") and name.endswith(")"):
        return interleaved(int(name[len("interleaved("):-1]))
    raise ValueError(f"unknown chain preset {name!r}")


def sigma(c, i, k=1):
    return c.sigma(i, k)


def z_orbit_rep(c, i):
    return c.orbit_rep(i)
