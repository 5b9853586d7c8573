"""Discrete tabular datasets and empirical probability estimates.

A :class:`Dataset` is an immutable table of categorical observations.  Each
column is a :class:`Variable` with a fixed alphabet of state labels; cells are
stored as integer state indices.  Every influence measure in this package sits
on top of :func:`prob`, a plain maximum-likelihood count ratio with no
smoothing.  Conditioning events with zero support return ``None`` (a
distinguished "undefined" result), never a silent zero.

CSV layout: UTF-8, comma separated, header row mandatory.  State alphabets are
built per column in first-appearance order.  Loading rejects ragged rows,
missing values, duplicate header names, and constant columns, reporting the
offending row/column position.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class Variable:
    """A named categorical variable with an ordered alphabet of state labels."""

    name: str
    alphabet: tuple[str, ...]
    index: int

    def __post_init__(self):
        if len(self.alphabet) < 2:
            raise DataError(
                f"variable {self.name!r}: alphabet needs >= 2 states, got {len(self.alphabet)}"
            )
        if len(set(self.alphabet)) != len(self.alphabet):
            raise DataError(f"variable {self.name!r}: duplicate state labels")

    @property
    def n_states(self) -> int:
        return len(self.alphabet)

    def state_index(self, label: str) -> int:
        try:
            return self.alphabet.index(label)
        except ValueError:
            raise DataError(f"variable {self.name!r}: unknown state label {label!r}") from None


@dataclass(frozen=True)
class Condition:
    """One variable pinned to a state.

    With ``negated=True`` the condition matches every state of the variable
    except ``state`` (the complement event).
    """

    var: int
    state: int
    negated: bool = False

    def inverted(self) -> "Condition":
        return Condition(self.var, self.state, not self.negated)


@dataclass(frozen=True)
class Assignment:
    """A conjunction of :class:`Condition` entries over distinct variables."""

    entries: tuple[Condition, ...] = ()

    def __post_init__(self):
        seen = [c.var for c in self.entries]
        if len(set(seen)) != len(seen):
            raise DataError(f"assignment mentions a variable twice: {sorted(seen)}")

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "Assignment":
        """Build a positive assignment from (variable, state) pairs."""
        return cls(tuple(Condition(v, s) for v, s in pairs))

    @property
    def variables(self) -> frozenset[int]:
        return frozenset(c.var for c in self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)


def combine(*parts: Assignment | Condition) -> Assignment:
    """Conjoin assignments/conditions; raises DataError on variable overlap."""
    entries: list[Condition] = []
    for p in parts:
        entries.extend(p.entries if isinstance(p, Assignment) else (p,))
    return Assignment(tuple(entries))


class Dataset:
    """Immutable encoded table of categorical observations.

    ``codes`` has shape (n_rows, n_vars); ``codes[r, v]`` is the state index
    of variable ``v`` in row ``r``.
    """

    __slots__ = ("variables", "codes", "_name_index")

    def __init__(self, variables: tuple[Variable, ...], codes: np.ndarray):
        variables = tuple(variables)
        codes = np.asarray(codes, dtype=np.int32)
        if codes.ndim != 2:
            raise DataError(f"codes must be 2-D, got shape {codes.shape}")
        if codes.shape[1] != len(variables):
            raise DataError(
                f"codes width {codes.shape[1]} != number of variables {len(variables)}"
            )
        if codes.shape[0] < 1:
            raise DataError("dataset needs at least one row")
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise DataError("duplicate variable names")
        for k, v in enumerate(variables):
            if v.index != k:
                raise DataError(f"variable {v.name!r} carries index {v.index}, expected {k}")
            col = codes[:, k]
            if col.min(initial=0) < 0 or col.max(initial=0) >= v.n_states:
                raise DataError(f"column {v.name!r}: state index out of range")
        codes = codes.copy()
        codes.flags.writeable = False
        self.variables = variables
        self.codes = codes
        self._name_index = {v.name: v.index for v in variables}

    @property
    def n_rows(self) -> int:
        return self.codes.shape[0]

    @property
    def n_vars(self) -> int:
        return self.codes.shape[1]

    def column(self, var: int) -> np.ndarray:
        return self.codes[:, var]

    def var_index(self, name: str) -> int:
        try:
            return self._name_index[name]
        except KeyError:
            raise DataError(f"unknown variable name {name!r}") from None

    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    def decoded_rows(self):
        """Iterate rows as tuples of state labels."""
        alphabets = [v.alphabet for v in self.variables]
        for row in self.codes:
            yield tuple(alphabets[k][row[k]] for k in range(self.n_vars))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.variables == other.variables and np.array_equal(self.codes, other.codes)

    def __repr__(self) -> str:
        return f"Dataset({self.n_rows} rows x {self.n_vars} vars)"


def load_csv(path) -> Dataset:
    """Load a Dataset from a CSV file.

    Raises DataError (with row/column position) for ragged rows, missing
    values, duplicate headers, constant columns, or an empty body.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, header row is mandatory") from None
        if not header or any(not h for h in header):
            raise DataError(f"{path}: header row has an empty name")
        if len(set(header)) != len(header):
            dupes = sorted({h for h in header if header.count(h) > 1})
            raise DataError(f"{path}: duplicate header names {dupes}")
        width = len(header)
        alphabets: list[dict[str, int]] = [{} for _ in header]
        encoded_rows: list[list[int]] = []
        for r, row in enumerate(reader, start=2):  # 1-based file lines, header is line 1
            if len(row) != width:
                raise DataError(f"{path}: row {r}: expected {width} fields, got {len(row)}")
            enc = []
            for c, token in enumerate(row):
                if token == "":
                    raise DataError(
                        f"{path}: row {r}, column {header[c]!r}: missing value"
                    )
                codes = alphabets[c]
                enc.append(codes.setdefault(token, len(codes)))
            encoded_rows.append(enc)
    if not encoded_rows:
        raise DataError(f"{path}: no data rows")
    for c, codes in enumerate(alphabets):
        if len(codes) < 2:
            raise DataError(
                f"{path}: column {header[c]!r} is constant ({len(codes)} distinct value)"
            )
    variables = tuple(
        Variable(name=header[c], alphabet=tuple(alphabets[c]), index=c) for c in range(width)
    )
    return Dataset(variables, np.array(encoded_rows, dtype=np.int32))


def write_csv(ds: Dataset, path) -> None:
    """Write a Dataset in the same dialect load_csv reads (no quoting)."""
    forbidden = (",", '"', "\n", "\r")
    for v in ds.variables:
        for token in (v.name, *v.alphabet):
            if any(ch in token for ch in forbidden):
                raise DataError(f"token {token!r} needs quoting, which the writer does not emit")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(v.name for v in ds.variables) + "\n")
        for row in ds.decoded_rows():
            fh.write(",".join(row) + "\n")


def _mask(ds: Dataset, assignment: Assignment) -> np.ndarray:
    m = np.ones(ds.n_rows, dtype=bool)
    for cond in assignment.entries:
        if not (0 <= cond.var < ds.n_vars):
            raise DataError(f"variable index {cond.var} out of range")
        if not (0 <= cond.state < ds.variables[cond.var].n_states):
            raise DataError(
                f"state index {cond.state} out of range for variable "
                f"{ds.variables[cond.var].name!r}"
            )
        col = ds.codes[:, cond.var]
        m &= (col != cond.state) if cond.negated else (col == cond.state)
    return m


def count(ds: Dataset, assignment: Assignment) -> int:
    """Number of rows matching the assignment."""
    return int(_mask(ds, assignment).sum())


def prob(ds: Dataset, target: Assignment, given: Assignment = Assignment()) -> float | None:
    """Empirical conditional probability P(target | given).

    Plain count ratio: count(target AND given) / count(given).  Returns None
    when the conditioning event has zero support (undefined), never 0.
    Target and given must mention disjoint variables.
    """
    if target.variables & given.variables:
        overlap = sorted(target.variables & given.variables)
        raise DataError(f"target and given share variables {overlap}")
    c_given = count(ds, given)
    if c_given == 0:
        return None
    c_both = count(ds, combine(target, given))
    return c_both / c_given
