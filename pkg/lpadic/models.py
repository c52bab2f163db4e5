from dataclasses import dataclass


@dataclass
class SymbolKey:
    N: int
    k: int
    sign: int
    bound: int


@dataclass
class CachedSymbol:
    key: SymbolKey
    export: str
    timestamp: int


@dataclass
class SweepRow:
    """
    One evaluated character of a sweep; rows are printed sorted by `sort_key`.
    """

    descriptor: str
    tame: int
    conductor_exponent: int
    wild: int
    j: int
    value: object
    euler: object
    exceptional: bool

    @property
    def sort_key(self) -> tuple[int, int, int, int]:
        return self.conductor_exponent, self.tame, self.wild, self.j
