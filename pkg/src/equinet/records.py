"""Parsing, validation and window slicing of the four tabular input record kinds.

Input files are header-first delimited UTF-8 text (comma by default).
Dates are ISO-8601 (``2015-03-01``), months are ``2015-03``, quarters are
``2015Q1``.  Name keys are matched by exact equality after whitespace
normalization; no fuzzy matching is performed.
"""

from __future__ import annotations

import calendar
import csv
import math
from dataclasses import dataclass, fields
from datetime import date
from pathlib import Path

from .errors import MissingColumn, RowInvariantViolation, UnparsableValue

__all__ = [
    "PeriodWindow",
    "ShareholderRecord",
    "LegalRepRecord",
    "MarketRecord",
    "FinancialRecord",
    "YearMonth",
    "YearQuarter",
    "QuarterlyAverages",
    "normalize_name",
    "parse_records",
    "parse_records_with_report",
    "write_records",
    "read_alias_table",
    "window_slice",
    "quarterly_average",
    "parse_window_spec",
    "check_windows",
]


def normalize_name(raw: str) -> str:
    """Trim and collapse internal whitespace to single spaces."""
    return " ".join(raw.split())


@dataclass(frozen=True, slots=True, order=True)
class YearMonth:
    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")

    @classmethod
    def parse(cls, text: str) -> "YearMonth":
        y, _, m = text.partition("-")
        return cls(int(y), int(m))

    def first_day(self) -> date:
        return date(self.year, self.month, 1)

    def last_day(self) -> date:
        return date(self.year, self.month, calendar.monthrange(self.year, self.month)[1])

    def __str__(self):
        return f"{self.year:04d}-{self.month:02d}"


@dataclass(frozen=True, slots=True, order=True)
class YearQuarter:
    year: int
    quarter: int

    def __post_init__(self):
        if not 1 <= self.quarter <= 4:
            raise ValueError(f"quarter out of range: {self.quarter}")

    @classmethod
    def parse(cls, text: str) -> "YearQuarter":
        y, _, q = text.upper().partition("Q")
        return cls(int(y), int(q))

    def end_date(self) -> date:
        month = 3 * self.quarter
        return date(self.year, month, calendar.monthrange(self.year, month)[1])

    def __str__(self):
        return f"{self.year:04d}Q{self.quarter}"


@dataclass(frozen=True, slots=True)
class PeriodWindow:
    """A labelled closed date interval ``[start, end]``."""

    label: str
    start: date
    end: date

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"window {self.label!r}: start {self.start} is after end {self.end}")

    def contains(self, value) -> bool:
        """Window membership for a date, month or quarter field value.

        Dates are point-in-interval; months must be wholly contained;
        a quarter belongs to the window holding its end date (the filing
        that becomes current during the window).
        """
        if isinstance(value, date):
            return self.start <= value <= self.end
        if isinstance(value, YearMonth):
            return value.first_day() >= self.start and value.last_day() <= self.end
        if isinstance(value, YearQuarter):
            return self.start <= value.end_date() <= self.end
        raise TypeError(f"cannot place a {type(value).__name__} in a window")


def parse_window_spec(text: str) -> PeriodWindow:
    """Parse the CLI/window-file form ``label:start:end``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"window spec must be label:start:end, got {text!r}")
    label, start, end = parts
    return PeriodWindow(label, date.fromisoformat(start), date.fromisoformat(end))


def check_windows(windows) -> list[str]:
    """Return problems (empty list if the window set is valid).

    Windows must be sorted by start date and pairwise non-overlapping.
    """
    problems = []
    seen = {}
    for w in windows:
        if w.label in seen:
            problems.append(f"duplicate window label {w.label!r}")
        seen[w.label] = w
    ordered = list(windows)
    for a, b in zip(ordered, ordered[1:]):
        if b.start <= a.end:
            if b.start < a.start:
                problems.append(f"windows {a.label!r} and {b.label!r} are not sorted by start date")
            else:
                problems.append(f"windows {a.label!r} and {b.label!r} overlap")
    return problems


@dataclass(frozen=True, slots=True)
class ShareholderRecord:
    firm_id: str
    shareholder_name: str
    rank: int
    report_date: date


@dataclass(frozen=True, slots=True)
class LegalRepRecord:
    person_name: str
    firm_id: str
    report_date: date


@dataclass(frozen=True, slots=True)
class MarketRecord:
    firm_id: str
    month: YearMonth
    monthly_return: float
    market_value: float
    trading_amount: float


@dataclass(frozen=True, slots=True)
class FinancialRecord:
    firm_id: str
    quarter: YearQuarter
    net_assets: float
    net_profit: float


def _parse_date(text):
    return date.fromisoformat(text)


def _parse_float(text):
    value = float(text)
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


# Per-kind column parsers.  Keys are the record classes themselves; callers
# pass the class as the ``kind`` argument.
_FIELD_PARSERS = {
    ShareholderRecord: {
        "firm_id": str.strip,
        "shareholder_name": normalize_name,
        "rank": int,
        "report_date": _parse_date,
    },
    LegalRepRecord: {
        "person_name": normalize_name,
        "firm_id": str.strip,
        "report_date": _parse_date,
    },
    MarketRecord: {
        "firm_id": str.strip,
        "month": YearMonth.parse,
        "monthly_return": _parse_float,
        "market_value": _parse_float,
        "trading_amount": _parse_float,
    },
    FinancialRecord: {
        "firm_id": str.strip,
        "quarter": YearQuarter.parse,
        "net_assets": _parse_float,
        "net_profit": _parse_float,
    },
}


def _row_problem(record) -> str | None:
    """Single-row invariant check; returns a message or None."""
    if isinstance(record, ShareholderRecord):
        if not 1 <= record.rank <= 10:
            return f"rank {record.rank} outside 1..10"
        if not record.shareholder_name:
            return "empty shareholder_name after normalization"
        if not record.firm_id:
            return "empty firm_id"
    elif isinstance(record, LegalRepRecord):
        if not record.person_name:
            return "empty person_name after normalization"
        if not record.firm_id:
            return "empty firm_id"
    elif isinstance(record, MarketRecord):
        if record.market_value <= 0:
            return f"market_value {record.market_value} must be > 0"
        if record.trading_amount < 0:
            return f"trading_amount {record.trading_amount} must be >= 0"
        if record.monthly_return <= -1:
            return f"monthly_return {record.monthly_return} must be > -1"
    elif isinstance(record, FinancialRecord):
        if not record.firm_id:
            return "empty firm_id"
    return None


class _CrossRowState:
    """Tracks multi-row invariants while rows stream through the parser."""

    def __init__(self, kind):
        self.kind = kind
        self.seen = {}

    def problem(self, record) -> str | None:
        if self.kind is ShareholderRecord:
            key = (record.firm_id, record.report_date)
            ranks = self.seen.setdefault(key, set())
            if record.rank in ranks:
                return (
                    f"duplicate rank {record.rank} for firm {record.firm_id} "
                    f"on {record.report_date}"
                )
            ranks.add(record.rank)
        elif self.kind is LegalRepRecord:
            key = (record.firm_id, record.report_date)
            if key in self.seen:
                return (
                    f"firm {record.firm_id} already has a legal representative "
                    f"on {record.report_date}"
                )
            self.seen[key] = record.person_name
        elif self.kind is FinancialRecord:
            key = (record.firm_id, record.quarter)
            if key in self.seen:
                return f"duplicate financial record for {record.firm_id} {record.quarter}"
            self.seen[key] = True
        return None


def parse_records_with_report(path, kind, *, delimiter=",", skip_bad_rows=False):
    """Parse one file, returning ``(records, skipped)``.

    ``skipped`` is a list of ``(line_number, reason)`` pairs and is only
    populated when ``skip_bad_rows`` is set; otherwise the first bad row
    raises.
    """
    parsers = _FIELD_PARSERS[kind]
    columns = [f.name for f in fields(kind)]
    path = Path(path)
    records = []
    skipped = []
    state = _CrossRowState(kind)
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumn(path, columns[0]) from None
        header = [h.strip() for h in header]
        for column in columns:
            if column not in header:
                raise MissingColumn(path, column)
        index = {column: header.index(column) for column in columns}

        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            values = {}
            bad = None
            for column in columns:
                if index[column] >= len(row):
                    bad = UnparsableValue(path, line, column, "<missing>")
                    break
                raw = row[index[column]]
                try:
                    values[column] = parsers[column](raw)
                except (ValueError, TypeError):
                    bad = UnparsableValue(path, line, column, raw)
                    break
            if bad is None:
                record = kind(**values)
                message = _row_problem(record) or state.problem(record)
                if message is not None:
                    bad = RowInvariantViolation(path, line, message)
            if bad is not None:
                if skip_bad_rows:
                    skipped.append((line, str(bad)))
                    continue
                raise bad
            records.append(record)
    return records, skipped


def parse_records(path, kind, *, delimiter=",", skip_bad_rows=False):
    """Parse one file into a list of ``kind`` records (order preserved)."""
    records, _ = parse_records_with_report(
        path, kind, delimiter=delimiter, skip_bad_rows=skip_bad_rows
    )
    return records


def _serialize_value(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records(path, records, kind, *, delimiter=","):
    """Serialize records so that re-parsing yields the same list back."""
    columns = [f.name for f in fields(kind)]
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, delimiter=delimiter, lineterminator="\n")
        writer.writerow(columns)
        for record in records:
            writer.writerow([_serialize_value(getattr(record, c)) for c in columns])


def read_alias_table(path, *, delimiter=","):
    """Read the shareholder-name -> firm_id resolution table.

    Two columns: ``name`` (the registry string as it appears in filings)
    and ``firm_id``.  Names are normalized the same way shareholder names
    are, so lookups by normalized key succeed.
    """
    path = Path(path)
    table = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle, delimiter=delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise MissingColumn(path, "name") from None
        for column in ("name", "firm_id"):
            if column not in header:
                raise MissingColumn(path, column)
        name_i, firm_i = header.index("name"), header.index("firm_id")
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            table[normalize_name(row[name_i])] = row[firm_i].strip()
    return table


def window_slice(records, window: PeriodWindow, date_field: str):
    """Records whose ``date_field`` value lies in the window, in stable order."""
    return [r for r in records if window.contains(getattr(r, date_field))]


@dataclass(frozen=True, slots=True)
class QuarterlyAverages:
    monthly_return: float
    market_value: float
    trading_amount: float
    months: int


def quarterly_average(market_records, window: PeriodWindow):
    """Per-firm arithmetic means of the market columns over in-window months.

    Firms with no months inside the window are absent from the result.
    Sums use ``math.fsum`` so results do not depend on record order or
    platform reduction order.
    """
    per_firm: dict[str, list[MarketRecord]] = {}
    for record in window_slice(market_records, window, "month"):
        per_firm.setdefault(record.firm_id, []).append(record)
    averages = {}
    for firm_id in sorted(per_firm):
        rows = per_firm[firm_id]
        n = len(rows)
        averages[firm_id] = QuarterlyAverages(
            monthly_return=math.fsum(r.monthly_return for r in rows) / n,
            market_value=math.fsum(r.market_value for r in rows) / n,
            trading_amount=math.fsum(r.trading_amount for r in rows) / n,
            months=n,
        )
    return averages
