from __future__ import annotations

from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equinet.errors import MissingColumn, RowInvariantViolation, UnparsableValue
from equinet.records import (
    FinancialRecord,
    LegalRepRecord,
    MarketRecord,
    PeriodWindow,
    ShareholderRecord,
    YearMonth,
    YearQuarter,
    check_windows,
    normalize_name,
    parse_records,
    parse_records_with_report,
    parse_window_spec,
    quarterly_average,
    window_slice,
    write_records,
)

W1 = PeriodWindow("G1", date(2015, 3, 1), date(2015, 5, 31))
W2 = PeriodWindow("G2", date(2015, 6, 1), date(2015, 8, 31))
W3 = PeriodWindow("G3", date(2015, 9, 1), date(2015, 11, 30))


def write(tmp_path, text, name="in.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestParsing:
    def test_small_fixture_counts(self, fixtures_dir):
        records = parse_records(fixtures_dir / "shareholders_small.csv", ShareholderRecord)
        assert len(records) == 30
        assert len({r.firm_id for r in records}) == 6

    def test_header_only_gives_empty_list(self, tmp_path):
        path = write(tmp_path, "firm_id,shareholder_name,rank,report_date\n")
        assert parse_records(path, ShareholderRecord) == []

    def test_rank_out_of_bounds_reports_line(self, tmp_path):
        path = write(
            tmp_path,
            "firm_id,shareholder_name,rank,report_date\n"
            "A,Fund One,1,2015-03-31\n"
            "A,Fund Two,11,2015-03-31\n",
        )
        with pytest.raises(RowInvariantViolation) as err:
            parse_records(path, ShareholderRecord)
        assert err.value.line == 3
        assert "rank 11" in str(err.value)

    def test_duplicate_rank_same_filing_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "firm_id,shareholder_name,rank,report_date\n"
            "A,Fund One,1,2015-03-31\n"
            "A,Fund Two,1,2015-03-31\n",
        )
        with pytest.raises(RowInvariantViolation, match="duplicate rank"):
            parse_records(path, ShareholderRecord)

    def test_missing_column(self, tmp_path):
        path = write(tmp_path, "firm_id,rank,report_date\nA,1,2015-03-31\n")
        with pytest.raises(MissingColumn) as err:
            parse_records(path, ShareholderRecord)
        assert err.value.column == "shareholder_name"

    def test_unparsable_value_reports_line(self, tmp_path):
        path = write(
            tmp_path,
            "firm_id,shareholder_name,rank,report_date\n"
            "A,Fund One,first,2015-03-31\n",
        )
        with pytest.raises(UnparsableValue) as err:
            parse_records(path, ShareholderRecord)
        assert err.value.line == 2
        assert err.value.column == "rank"

    def test_skip_bad_rows_counts_skips(self, tmp_path):
        path = write(
            tmp_path,
            "firm_id,shareholder_name,rank,report_date\n"
            "A,Fund One,1,2015-03-31\n"
            "A,Fund Two,11,2015-03-31\n"
            "A,Fund Three,2,2015-03-31\n",
        )
        records, skipped = parse_records_with_report(path, ShareholderRecord, skip_bad_rows=True)
        assert len(records) == 2
        assert len(skipped) == 1
        assert skipped[0][0] == 3

    def test_name_normalization(self, tmp_path):
        path = write(
            tmp_path,
            "firm_id,shareholder_name,rank,report_date\n"
            'A,"  Fund   One ",1,2015-03-31\n',
        )
        [record] = parse_records(path, ShareholderRecord)
        assert record.shareholder_name == "Fund One"

    def test_duplicate_legal_rep_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "person_name,firm_id,report_date\n"
            "Chen Wei,A,2015-03-31\n"
            "Li Qiang,A,2015-03-31\n",
        )
        with pytest.raises(RowInvariantViolation, match="legal representative"):
            parse_records(path, LegalRepRecord)

    def test_market_invariants(self, tmp_path):
        path = write(
            tmp_path,
            "firm_id,month,monthly_return,market_value,trading_amount\n"
            "A,2015-03,0.05,-10,5\n",
        )
        with pytest.raises(RowInvariantViolation, match="market_value"):
            parse_records(path, MarketRecord)

    def test_duplicate_financial_quarter_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "firm_id,quarter,net_assets,net_profit\n"
            "A,2015Q1,100,10\n"
            "A,2015Q1,120,12\n",
        )
        with pytest.raises(RowInvariantViolation, match="duplicate financial"):
            parse_records(path, FinancialRecord)


_KINDS = {
    ShareholderRecord: [
        ShareholderRecord("600001", "Fund One", 1, date(2015, 3, 31)),
        ShareholderRecord("600002", "Chen Wei", 2, date(2015, 6, 30)),
    ],
    LegalRepRecord: [
        LegalRepRecord("Chen Wei", "600001", date(2015, 3, 31)),
    ],
    MarketRecord: [
        MarketRecord("600001", YearMonth(2015, 3), 0.0125, 1.5e9, 3.25e7),
        MarketRecord("600001", YearMonth(2015, 4), -0.5, 2.5e9, 0.0),
    ],
    FinancialRecord: [
        FinancialRecord("600001", YearQuarter(2015, 1), 4.2e8, -1.1e6),
    ],
}


@pytest.mark.parametrize("kind", list(_KINDS), ids=lambda k: k.__name__)
def test_round_trip_is_fixed_point(tmp_path, kind):
    records = _KINDS[kind]
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    write_records(first, records, kind)
    reparsed = parse_records(first, kind)
    assert reparsed == records
    write_records(second, reparsed, kind)
    assert first.read_text() == second.read_text()


@given(
    st.lists(
        st.tuples(
            st.floats(min_value=-0.99, max_value=10, allow_nan=False),
            st.floats(min_value=0.01, max_value=1e12, allow_nan=False),
            st.floats(min_value=0, max_value=1e12, allow_nan=False),
        ),
        max_size=20,
    )
)
@settings(max_examples=50, deadline=None)
def test_market_round_trip_property(tmp_path_factory, rows):
    records = [
        MarketRecord("F1", YearMonth(2015, 1 + i % 12), r, v, t)
        for i, (r, v, t) in enumerate(rows)
    ]
    path = tmp_path_factory.mktemp("rt") / "m.csv"
    write_records(path, records, MarketRecord)
    assert parse_records(path, MarketRecord) == records


class TestWindows:
    def test_window_spec_parsing(self):
        w = parse_window_spec("G1:2015-03-01:2015-05-31")
        assert w == W1

    def test_invalid_window_order(self):
        with pytest.raises(ValueError):
            PeriodWindow("X", date(2015, 5, 1), date(2015, 3, 1))

    def test_overlap_detection_names_both(self):
        overlapping = PeriodWindow("G1b", date(2015, 5, 15), date(2015, 6, 15))
        problems = check_windows([W1, overlapping])
        assert any("G1" in p and "G1b" in p for p in problems)

    def test_ordering_detection(self):
        problems = check_windows([W2, W1])
        assert problems

    def test_valid_windows_pass(self):
        assert check_windows([W1, W2, W3]) == []


class TestSlicing:
    RECORDS = [
        ShareholderRecord("A", "S", 1, date(2015, 3, 15)),
        ShareholderRecord("B", "S", 1, date(2015, 6, 15)),
        ShareholderRecord("C", "S", 1, date(2015, 9, 15)),
    ]

    def test_covering_window_is_identity(self):
        window = PeriodWindow("all", date(2014, 1, 1), date(2016, 1, 1))
        assert window_slice(self.RECORDS, window, "report_date") == self.RECORDS

    def test_disjoint_window_is_empty(self):
        window = PeriodWindow("early", date(2010, 1, 1), date(2010, 12, 31))
        assert window_slice(self.RECORDS, window, "report_date") == []

    def test_three_paper_windows_split_fixture(self):
        slices = [window_slice(self.RECORDS, w, "report_date") for w in (W1, W2, W3)]
        assert [len(s) for s in slices] == [1, 1, 1]
        assert {s[0].firm_id for s in slices} == {"A", "B", "C"}

    def test_slice_distributes_over_concatenation(self):
        a = self.RECORDS[:2]
        b = self.RECORDS[2:]
        assert window_slice(a + b, W1, "report_date") == (
            window_slice(a, W1, "report_date") + window_slice(b, W1, "report_date")
        )

    def test_month_must_be_wholly_contained(self):
        record = MarketRecord("A", YearMonth(2015, 5), 0.1, 1.0, 1.0)
        inside = PeriodWindow("w", date(2015, 5, 1), date(2015, 5, 31))
        partial = PeriodWindow("w", date(2015, 5, 2), date(2015, 6, 30))
        assert window_slice([record], inside, "month") == [record]
        assert window_slice([record], partial, "month") == []

    def test_quarter_belongs_to_window_holding_its_end(self):
        record = FinancialRecord("A", YearQuarter(2015, 1), 100.0, 1.0)
        assert window_slice([record], W1, "quarter") == [record]  # ends 03-31
        assert window_slice([record], W2, "quarter") == []


class TestQuarterlyAverage:
    def make(self, firm, month, ret, mv=100.0, ta=10.0):
        return MarketRecord(firm, YearMonth(2015, month), ret, mv, ta)

    def test_constant_mean(self):
        records = [self.make("A", m, 0.1) for m in (3, 4, 5)]
        averages = quarterly_average(records, W1)
        assert averages["A"].monthly_return == pytest.approx(0.1)
        assert averages["A"].months == 3

    def test_two_point_mean(self):
        records = [self.make("A", 3, 0.0), self.make("A", 4, 0.3)]
        assert quarterly_average(records, W1)["A"].monthly_return == pytest.approx(0.15)

    def test_firm_outside_window_absent(self):
        records = [self.make("A", 7, 0.1)]
        assert "A" not in quarterly_average(records, W1)

    def test_four_firms_against_independent_summation(self):
        returns = {
            "A": [0.02, -0.01, 0.04],
            "B": [0.10, 0.10, 0.10],
            "C": [-0.05, 0.00, 0.05],
            "D": [0.33, -0.12, 0.07],
        }
        records = []
        for firm, values in returns.items():
            for month, r in zip((3, 4, 5), values):
                records.append(self.make(firm, month, r, mv=50 + month, ta=month))
        averages = quarterly_average(records, W1)
        for firm, values in returns.items():
            expected = sum(values) / len(values)  # independent summation
            assert averages[firm].monthly_return == pytest.approx(expected, abs=1e-15)
            assert averages[firm].market_value == pytest.approx((53 + 54 + 55) / 3)
            assert averages[firm].trading_amount == pytest.approx(4.0)

    def test_permutation_invariance(self):
        records = [self.make("A", m, r) for m, r in ((3, 0.2), (4, -0.1), (5, 0.05))]
        forward = quarterly_average(records, W1)
        backward = quarterly_average(records[::-1], W1)
        assert forward == backward


def test_normalize_name_collapses_whitespace():
    assert normalize_name("  a \t b\nc ") == "a b c"
