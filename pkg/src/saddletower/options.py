from dataclasses import dataclass


@dataclass(frozen=True)
class SolveOptions:
    tol: float = 1e-12
    max_iter: int = 100
    damping_floor: float = 2.0**-20
    rank_rel_tol: float = 1e-8

    def __post_init__(self):
        if not (0 < self.tol < 1):
            raise ValueError("tol must lie in (0, 1)")
        if self.max_iter <= 0 or self.damping_floor <= 0 or self.rank_rel_tol <= 0:
            raise ValueError("solver options must be positive")
