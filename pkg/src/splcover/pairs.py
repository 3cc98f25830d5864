"""Weighted feature pairs (configurations) and prioritized coverage metrics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    CoverageUndefinedError,
    InvalidProductError,
    SuiteIncompleteError,
)
from .model import FeatureModel, Product, is_valid_product

DEFAULT_LEVELS = (50, 75, 80, 85, 90, 95, 96, 97, 98, 99, 100)

# tolerance for aggregate weight equalities and level thresholds
WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class Pair:
    """Two distinct features with polarities, canonically ordered by the
    model's feature order (first.feature precedes second.feature)."""

    first: tuple  # (feature, selected: bool)
    second: tuple

    def __str__(self):
        def fmt(item):
            f, pol = item
            return f if pol else f"!{f}"

        return f"({fmt(self.first)}, {fmt(self.second)})"


def make_pair(fm: FeatureModel, f1: str, pol1: bool, f2: str, pol2: bool) -> Pair:
    if f1 == f2:
        raise ValueError("pair features must differ")
    if fm.index[f1] < fm.index[f2]:
        return Pair((f1, pol1), (f2, pol2))
    return Pair((f2, pol2), (f1, pol1))


@dataclass(frozen=True)
class PrioritizedProduct:
    product: Product
    weight: float


def configurations_of(fm: FeatureModel, product: Iterable[str]) -> set[Pair]:
    """All n(n-1)/2 canonical pairs realized by a product."""
    sel = set(product)
    feats = fm.features
    out = set()
    for i in range(len(feats)):
        for j in range(i + 1, len(feats)):
            out.add(Pair((feats[i], feats[i] in sel), (feats[j], feats[j] in sel)))
    return out


class ConfigurationSet:
    """Pair weights derived from prioritized products.

    Immutable after construction.  ``obligations`` lists the weight-positive
    pairs in a deterministic order; products are matched against them via
    bitsets for coverage accounting.
    """

    def __init__(self, fm: FeatureModel, weights: dict):
        self.fm = fm
        self.configs = dict(weights)
        self.total_weight = math.fsum(weights.values())
        indexed = []
        for pair, w in weights.items():
            if w > 0:
                i, si = fm.index[pair.first[0]], pair.first[1]
                j, sj = fm.index[pair.second[0]], pair.second[1]
                indexed.append(((i, si, j, sj), pair, w))
        indexed.sort(key=lambda item: item[0])
        self.obligations = [pair for _, pair, _ in indexed]
        self.obligation_weights = [w for _, _, w in indexed]
        self._obligation_keys = [key for key, _, _ in indexed]
        self._cover_cache: dict[int, int] = {}

    @property
    def n_obligations(self) -> int:
        return len(self.obligations)

    def all_bits(self) -> int:
        return (1 << len(self.obligations)) - 1

    def covered_bits(self, product: Iterable[str]) -> int:
        """Bitset of obligations covered by a product."""
        mask = self.fm.mask_of(product)
        bits = self._cover_cache.get(mask)
        if bits is None:
            bits = 0
            for k, (i, si, j, sj) in enumerate(self._obligation_keys):
                if (mask >> i & 1) == si and (mask >> j & 1) == sj:
                    bits |= 1 << k
            self._cover_cache[mask] = bits
        return bits

    def weight_of_bits(self, bits: int) -> float:
        return math.fsum(
            w for k, w in enumerate(self.obligation_weights) if bits >> k & 1
        )

    def uncovered_pairs(self, bits: int) -> list[Pair]:
        return [p for k, p in enumerate(self.obligations) if not bits >> k & 1]


def derive_configurations(
    fm: FeatureModel, pps: Sequence[PrioritizedProduct]
) -> ConfigurationSet:
    """Sum prioritized-product weights onto every pair they cover."""
    weights: dict[Pair, float] = {}
    for idx, pp in enumerate(pps):
        if pp.weight < 0:
            raise InvalidProductError(f"negative weight {pp.weight}", index=idx)
        if not is_valid_product(fm, pp.product):
            raise InvalidProductError("not a valid product of the model", index=idx)
        for pair in configurations_of(fm, pp.product):
            weights[pair] = weights.get(pair, 0.0) + pp.weight
    return ConfigurationSet(fm, weights)


def coverage(suite: Sequence[Product], cs: ConfigurationSet) -> float:
    """Weighted coverage ratio of a suite, in [0, 1]."""
    if cs.total_weight <= 0:
        raise CoverageUndefinedError("total configuration weight is zero")
    bits = 0
    for product in suite:
        bits |= cs.covered_bits(product)
    return cs.weight_of_bits(bits) / cs.total_weight


def products_to_levels(
    suite: Sequence[Product],
    cs: ConfigurationSet,
    levels: Sequence[int] = DEFAULT_LEVELS,
) -> dict[int, int]:
    """Smallest prefix length reaching each coverage level (in percent)."""
    if cs.total_weight <= 0:
        raise CoverageUndefinedError("total configuration weight is zero")
    prefix_cov = []
    bits = 0
    for product in suite:
        bits |= cs.covered_bits(product)
        prefix_cov.append(cs.weight_of_bits(bits) / cs.total_weight)
    out = {}
    for level in levels:
        threshold = level / 100.0 - WEIGHT_TOL
        for k, cov in enumerate(prefix_cov, start=1):
            if cov >= threshold:
                out[level] = k
                break
        else:
            reached = max((c for c in prefix_cov), default=0.0)
            raise SuiteIncompleteError(math.floor(reached * 100))
    return out


def is_covering_array(suite: Sequence[Product], cs: ConfigurationSet) -> bool:
    """Direct scan: does the suite cover every weight-positive pair?"""
    bits = 0
    for product in suite:
        bits |= cs.covered_bits(product)
    return bits == cs.all_bits()


def read_prioritized_products(text: str, fm: FeatureModel) -> list[PrioritizedProduct]:
    """Parse the .pp CSV format: header ``weight,features``; features is a
    ``;``-separated list of selected names, everything else deselected."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != [
        "weight",
        "features",
    ]:
        raise InvalidProductError("expected CSV header 'weight,features'")
    out = []
    for idx, row in enumerate(reader):
        try:
            weight = float(row["weight"])
        except (TypeError, ValueError):
            raise InvalidProductError(f"bad weight {row['weight']!r}", index=idx)
        if weight < 0 or not math.isfinite(weight):
            raise InvalidProductError(f"bad weight {row['weight']!r}", index=idx)
        names = [t for t in (row["features"] or "").split(";") if t]
        for name in names:
            if name not in fm.index:
                raise InvalidProductError(f"unknown feature {name!r}", index=idx)
        product = frozenset(names)
        if not is_valid_product(fm, product):
            raise InvalidProductError("not a valid product of the model", index=idx)
        out.append(PrioritizedProduct(product, weight))
    return out


def write_prioritized_products(pps: Sequence[PrioritizedProduct], fm: FeatureModel) -> str:
    lines = ["weight,features"]
    for pp in pps:
        names = ";".join(f for f in fm.features if f in pp.product)
        lines.append(f"{pp.weight:g},{names}")
    return "\n".join(lines) + "\n"
