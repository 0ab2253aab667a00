"""Field comparison: similarity binning, pair indexing, pattern tables.

Comparison levels are small integers, 0 = missing comparison (either value
absent), 1..k increasing with similarity. Pattern tables aggregate the
per-pair level tuples; marginal tallies count levels over the full cross
product so that indexed-out pairs can still enter the non-match component.
"""

import csv
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import similarity

JW_CUT_POINTS = (0.25, 0.45, 0.6, 0.85)
LEV_CUT_POINTS = (0.25, 0.5, 0.75)

KINDS = ("jaro_winkler", "padded_levenshtein", "exact", "middle_name_hybrid")

# Middle-name levels. Two full names are compared like any other name
# field; initials fall into four extra categories. Canonical order, most
# to least similar:
#   10  full/full, equal
#    9  initial/initial, equal
#    8  initial/full, initial equals first letter
#    7  full/full, [0.85, 1)
#    6  full/full, [0.6, 0.85)
#    5  full/full, [0.45, 0.6)
#    4  full/full, [0.25, 0.45)
#    3  full/full, [0, 0.25)
#    2  initial/initial, unequal
#    1  initial/full, first letters differ
MIDDLE_LEVELS = 10
MIDDLE_FULL_EXACT = 10
MIDDLE_INITIAL_INITIAL_MATCH = 9
MIDDLE_INITIAL_FULL_MATCH = 8
MIDDLE_INITIAL_INITIAL_MISS = 2
MIDDLE_INITIAL_FULL_MISS = 1
_MIDDLE_FULL_BIN_BASE = 2  # full/full bin b of Table-style cuts -> level b + 2


@dataclass(frozen=True)
class ComparatorSpec:
    field: str
    kind: str
    cut_points: Optional[tuple] = None
    prefix_scale: float = 0.1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown comparator kind {self.kind!r}")
        if self.cut_points is None:
            defaults = {
                "jaro_winkler": JW_CUT_POINTS,
                "padded_levenshtein": LEV_CUT_POINTS,
                "middle_name_hybrid": JW_CUT_POINTS,
                "exact": (),
            }
            object.__setattr__(self, "cut_points", defaults[self.kind])
        if list(self.cut_points) != sorted(set(self.cut_points)):
            raise ValueError("cut_points must be strictly ascending")
        if any(not 0.0 < c < 1.0 for c in self.cut_points):
            raise ValueError("cut_points must lie in (0, 1)")

    @property
    def n_levels(self) -> int:
        if self.kind == "exact":
            return 2
        if self.kind == "middle_name_hybrid":
            return MIDDLE_LEVELS
        return len(self.cut_points) + 2


def bin_similarity(sim: float, spec: ComparatorSpec) -> int:
    """Map a similarity in [0,1] to an ordinal level.

    The top level is reserved for exact similarity 1; the remaining bins
    are lower-inclusive, upper-exclusive intervals between cut points.
    """
    if not 0.0 <= sim <= 1.0:
        raise ValueError(f"similarity {sim} outside [0, 1]")
    if spec.kind == "exact":
        raise ValueError("exact comparators have no similarity bins")
    if sim == 1.0:
        return spec.n_levels
    return 1 + bisect_right(spec.cut_points, sim)


def _bin_array(sims: np.ndarray, spec: ComparatorSpec) -> np.ndarray:
    levels = np.searchsorted(np.asarray(spec.cut_points), sims, side="right") + 1
    levels[sims >= 1.0] = spec.n_levels
    return levels.astype(np.int16)


def compare_middle_name(ma: Optional[str], mb: Optional[str],
                        prefix_scale: float = 0.1,
                        cut_points: tuple = JW_CUT_POINTS) -> int:
    """Hybrid middle-name comparison over full names and initials."""
    if not ma or not mb:
        return 0
    a_initial = len(ma) == 1
    b_initial = len(mb) == 1
    if a_initial and b_initial:
        return (MIDDLE_INITIAL_INITIAL_MATCH if ma == mb
                else MIDDLE_INITIAL_INITIAL_MISS)
    if a_initial or b_initial:
        initial, full = (ma, mb) if a_initial else (mb, ma)
        return (MIDDLE_INITIAL_FULL_MATCH if initial == full[0]
                else MIDDLE_INITIAL_FULL_MISS)
    sim = similarity.jaro_winkler(ma, mb, prefix_scale)
    if sim == 1.0:
        return MIDDLE_FULL_EXACT
    return _MIDDLE_FULL_BIN_BASE + 1 + bisect_right(cut_points, sim)


def compare_values(spec: ComparatorSpec, va: Optional[str],
                   vb: Optional[str]) -> int:
    """Level for one field of one pair; 0 when either value is missing."""
    if va is None or vb is None:
        return 0
    if spec.kind == "exact":
        return 2 if va == vb else 1
    if spec.kind == "jaro_winkler":
        return bin_similarity(similarity.jaro_winkler(va, vb, spec.prefix_scale), spec)
    if spec.kind == "padded_levenshtein":
        return bin_similarity(similarity.padded_levenshtein_sim(va, vb), spec)
    return compare_middle_name(va, vb, spec.prefix_scale, spec.cut_points)


def _levels_for_value_pairs(spec: ComparatorSpec, xs, ys) -> np.ndarray:
    """Levels for parallel lists of present values."""
    if spec.kind == "jaro_winkler":
        return _bin_array(similarity.jaro_winkler_pairs(xs, ys, spec.prefix_scale), spec)
    if spec.kind == "padded_levenshtein":
        return _bin_array(similarity.padded_levenshtein_pairs(xs, ys), spec)
    if spec.kind == "exact":
        return np.fromiter(
            (2 if x == y else 1 for x, y in zip(xs, ys)),
            dtype=np.int16, count=len(xs))
    return np.fromiter(
        (compare_middle_name(x, y, spec.prefix_scale, spec.cut_points)
         for x, y in zip(xs, ys)),
        dtype=np.int16, count=len(xs))


# ---------------------------------------------------------------------------
# Pair indexing


@dataclass(frozen=True)
class IndexClause:
    """Candidate pairs must agree on the first prefix_len characters.

    Exceptions lengthen the prefix for values starting with a given
    string; exception prefixes may not be longer than prefix_len (this
    keeps the per-record key construction equivalent to the pairwise
    rule).
    """

    field: str
    prefix_len: int
    exceptions: tuple = ()  # of (prefix, prefix_len)

    def __post_init__(self):
        if self.prefix_len < 1:
            raise ValueError("prefix_len must be >= 1")
        for prefix, k in self.exceptions:
            if len(prefix) > self.prefix_len:
                raise ValueError(
                    "exception prefix may not exceed the clause prefix length")
            if k < self.prefix_len:
                raise ValueError("exception prefix_len must not shorten the clause")

    def key(self, value: str):
        for prefix, k in self.exceptions:
            if value.startswith(prefix):
                return (prefix, value[:k])
        return ("", value[:self.prefix_len])


@dataclass
class PairIndex:
    a: np.ndarray  # int32 row indices into file A, lexicographically sorted
    b: np.ndarray
    n_a: int
    n_b: int
    provenance: str = ""

    def __len__(self):
        return len(self.a)


def index_pairs(table_a, table_b, clauses) -> PairIndex:
    """Union of per-clause candidate pairs (disjunction of blocking keys)."""
    n_a, n_b = len(table_a), len(table_b)
    codes = []
    for clause in clauses:
        groups_a = {}
        for i, v in enumerate(table_a.column(clause.field)):
            if v is not None:
                groups_a.setdefault(clause.key(v), []).append(i)
        groups_b = {}
        for j, v in enumerate(table_b.column(clause.field)):
            if v is not None:
                groups_b.setdefault(clause.key(v), []).append(j)
        for key, rows_a in groups_a.items():
            rows_b = groups_b.get(key)
            if not rows_b:
                continue
            ai = np.asarray(rows_a, dtype=np.int64)
            bj = np.asarray(rows_b, dtype=np.int64)
            grid = ai[:, None] * n_b + bj[None, :]
            codes.append(grid.ravel())
    if codes:
        merged = np.unique(np.concatenate(codes))
    else:
        merged = np.empty(0, dtype=np.int64)
    prov = " OR ".join(
        f"{c.field}[:{c.prefix_len}]"
        + "".join(f" ({p}->[:{k}])" for p, k in c.exceptions)
        for c in clauses)
    return PairIndex(
        a=(merged // n_b).astype(np.int32),
        b=(merged % n_b).astype(np.int32),
        n_a=n_a, n_b=n_b, provenance=prov,
    )


# ---------------------------------------------------------------------------
# Pattern tables


@dataclass
class PatternTable:
    fields: tuple          # field names, one per comparison
    n_levels: tuple        # k_j per field
    patterns: np.ndarray   # (P, d) int16, distinct level tuples
    counts: np.ndarray     # (P,) int64
    pair_a: np.ndarray     # (n_pairs,) int32
    pair_b: np.ndarray     # (n_pairs,) int32
    pair_pattern: np.ndarray  # (n_pairs,) int32 index into patterns
    n_a: int
    n_b: int

    @property
    def n_pairs(self) -> int:
        return len(self.pair_a)

    def level_marginals(self):
        """Per field: counts of indexed pairs at each level (index = level)."""
        out = []
        for j, k in enumerate(self.n_levels):
            out.append(np.bincount(self.patterns[:, j],
                                   weights=self.counts,
                                   minlength=k + 1).astype(np.int64))
        return out

    def pair_lookup(self) -> dict:
        """(a, b) -> pattern index; built on demand, intended for tests."""
        return {(int(a), int(b)): int(p) for a, b, p in
                zip(self.pair_a, self.pair_b, self.pair_pattern)}


def _field_codes(table, fieldname):
    """Unique present values and per-row codes (-1 where missing)."""
    uniques = []
    lookup = {}
    codes = np.empty(len(table), dtype=np.int64)
    for i, v in enumerate(table.column(fieldname)):
        if v is None:
            codes[i] = -1
        else:
            c = lookup.get(v)
            if c is None:
                c = len(uniques)
                lookup[v] = c
                uniques.append(v)
            codes[i] = c
    return uniques, codes


def _pair_levels(spec: ComparatorSpec, table_a, table_b,
                 idx_a: np.ndarray, idx_b: np.ndarray) -> np.ndarray:
    """Levels for the given pair list; similarity memoized on unique value pairs."""
    ua, ca = _field_codes(table_a, spec.field)
    ub, cb = _field_codes(table_b, spec.field)
    levels = np.zeros(len(idx_a), dtype=np.int16)
    pa = ca[idx_a]
    pb = cb[idx_b]
    present = (pa >= 0) & (pb >= 0)
    if not present.any():
        return levels
    combos = pa[present] * max(len(ub), 1) + pb[present]
    uniq, inverse = np.unique(combos, return_inverse=True)
    xs = [ua[c // max(len(ub), 1)] for c in uniq]
    ys = [ub[c % max(len(ub), 1)] for c in uniq]
    combo_levels = _levels_for_value_pairs(spec, xs, ys)
    levels[present] = combo_levels[inverse]
    return levels


def build_pattern_table(table_a, table_b, index: PairIndex, specs) -> PatternTable:
    """One comparison vector per indexed pair, aggregated into distinct patterns."""
    d = len(specs)
    n_pairs = len(index)
    matrix = np.zeros((n_pairs, d), dtype=np.int16)
    for j, spec in enumerate(specs):
        matrix[:, j] = _pair_levels(spec, table_a, table_b, index.a, index.b)
    if n_pairs:
        patterns, inverse, counts = np.unique(
            matrix, axis=0, return_inverse=True, return_counts=True)
        inverse = inverse.reshape(-1)
    else:
        patterns = np.zeros((0, d), dtype=np.int16)
        inverse = np.zeros(0, dtype=np.int64)
        counts = np.zeros(0, dtype=np.int64)
    return PatternTable(
        fields=tuple(s.field for s in specs),
        n_levels=tuple(s.n_levels for s in specs),
        patterns=patterns.astype(np.int16),
        counts=counts.astype(np.int64),
        pair_a=index.a.astype(np.int32),
        pair_b=index.b.astype(np.int32),
        pair_pattern=inverse.astype(np.int32),
        n_a=index.n_a,
        n_b=index.n_b,
    )


# ---------------------------------------------------------------------------
# Marginal tallies over the full cross product (U-correction input)


@dataclass
class UCorrectionTallies:
    fields: tuple
    n_levels: tuple
    full: list      # per field: int64 array of length k_j + 1, index = level
    indexed: list   # same shape, restricted to indexed pairs

    def excluded(self):
        return [f - i for f, i in zip(self.full, self.indexed)]


def _value_frequencies(table, fieldname):
    values, counts = [], []
    lookup = {}
    missing = 0
    for v in table.column(fieldname):
        if v is None:
            missing += 1
            continue
        c = lookup.get(v)
        if c is None:
            lookup[v] = len(values)
            values.append(v)
            counts.append(0)
            c = lookup[v]
        counts[c] += 1
    return values, np.asarray(counts, dtype=np.int64), missing


def marginal_frequency_tallies(table_a, table_b, specs,
                               pattern_table: PatternTable) -> UCorrectionTallies:
    """Level tallies over all n_A*n_B pairs, computed from unique values.

    Each unique value pair is compared once and weighted by the product of
    its occurrence counts, so a value occurring 8,173 times against one
    occurring 8,349 times contributes 68,236,377 pairs through a single
    comparison. Pairs with a missing value on either side tally at level 0.
    The indexed-pair tallies come from the pattern table, so excluded-pair
    tallies are the difference.
    """
    n_a, n_b = len(table_a), len(table_b)
    total = np.int64(n_a) * np.int64(n_b)
    full = []
    for spec in specs:
        va, ca, _ = _value_frequencies(table_a, spec.field)
        vb, cb, _ = _value_frequencies(table_b, spec.field)
        tally = np.zeros(spec.n_levels + 1, dtype=np.int64)
        if va and vb:
            xs = [x for x in va for _ in vb]
            ys = vb * len(va)
            levels = _levels_for_value_pairs(spec, xs, ys)
            weights = (ca[:, None] * cb[None, :]).ravel()
            tally += np.bincount(levels, weights=weights,
                                 minlength=spec.n_levels + 1).astype(np.int64)
        tally[0] = total - int(ca.sum()) * int(cb.sum())
        full.append(tally)
    indexed = pattern_table.level_marginals()
    return UCorrectionTallies(
        fields=tuple(s.field for s in specs),
        n_levels=tuple(s.n_levels for s in specs),
        full=full,
        indexed=indexed,
    )


# ---------------------------------------------------------------------------
# Columnar text serialization


def write_pattern_table(pt: PatternTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(pt.fields) + ["count"])
        for row, count in zip(pt.patterns, pt.counts):
            writer.writerow([int(v) for v in row] + [int(count)])


def write_tallies(tallies: UCorrectionTallies, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["field", "level", "full", "indexed"])
        for j, name in enumerate(tallies.fields):
            for level in range(tallies.n_levels[j] + 1):
                writer.writerow([name, level,
                                 int(tallies.full[j][level]),
                                 int(tallies.indexed[j][level])])


def read_tallies(path) -> UCorrectionTallies:
    rows = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            rows.setdefault(row["field"], []).append(
                (int(row["level"]), int(row["full"]), int(row["indexed"])))
    fields = tuple(rows)
    n_levels, full, indexed = [], [], []
    for name in fields:
        entries = sorted(rows[name])
        k = entries[-1][0]
        n_levels.append(k)
        f = np.zeros(k + 1, dtype=np.int64)
        x = np.zeros(k + 1, dtype=np.int64)
        for level, fc, ic in entries:
            f[level] = fc
            x[level] = ic
        full.append(f)
        indexed.append(x)
    return UCorrectionTallies(fields=fields, n_levels=tuple(n_levels),
                              full=full, indexed=indexed)
