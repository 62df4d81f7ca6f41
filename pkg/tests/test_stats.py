import random

import pytest

import stats_oracle
from corpus_builder import build_corpus, random_corpus_tables, table_from_texts

from tablecorpus.config import FilterConfig
from tablecorpus.errors import CorpusError, ValidationError
from tablecorpus.models import PageRef
from tablecorpus.stats import (
    QuerySpec,
    compute_stats,
    header_frequency,
    render_stats_lines,
    row_column_marginals,
    search,
    size_histogram,
    superlatives,
    table_rich_pages,
    write_reports,
)

A_TITLE = "Чемпионат мира по хоккею"
B_TITLE = "Список сезонов"
C_TITLE = "Города России"
D_TITLE = "Разное"


def designed_ranking_tables():
    """25 tables whose rankings are fully hand-computable.

    Totals (by hand): 25 tables, 96 rows, 96 columns, 380 cells.
    """
    tables = []
    # page A: five 5x4 tables with headers, three 2x2 headerless
    for k in range(5):
        texts = [["Год", "Место", "Команда", "Игры", "Очки"]]
        for r in range(1, 4):
            texts.append([f"199{r}", f"{r}", "Слован", f"1{r}", f"2{r}"])
        tables.append(table_from_texts(10, k, texts, header_rows=1, page_title=A_TITLE,
                                       caption="Чемпионат" if k == 0 else None))
    for k in range(5, 8):
        tables.append(table_from_texts(10, k, [["а", "б"], ["в", "г"]],
                                       page_title=A_TITLE))
    # page B: four 5x3 with headers, six 3x5 with digit-heavy headers
    for k in range(4):
        texts = [["Год", "Сезон", "Игры", "Голы", "Очки"]]
        for r in range(1, 3):
            texts.append([f"200{r}", "осень", f"3{r}", f"4{r}", f"5{r}"])
        tables.append(table_from_texts(20, k, texts, header_rows=1, page_title=B_TITLE))
    for k in range(4, 10):
        texts = [["1", "2", "Год"]]
        for r in range(1, 5):
            texts.append([f"{r}", f"х{r}", f"190{r}"])
        tables.append(table_from_texts(20, k, texts, header_rows=1, page_title=B_TITLE))
    # page C: the widest table (9 cols), the biggest table (4x12, 463 chars),
    # four 2x2 headerless
    tables.append(
        table_from_texts(
            30, 0,
            [[str(i) for i in range(1, 10)], ["а"] * 9],
            header_rows=1, page_title=C_TITLE,
        )
    )
    big = [["Город", "Регион", "Население", "Год"]]
    for r in range(11):
        big.append([f"город{r:02d}вид"] * 4)
    tables.append(table_from_texts(30, 1, big, header_rows=1, page_title=C_TITLE,
                                   caption="Крупные города"))
    for k in range(2, 6):
        tables.append(table_from_texts(30, k, [["д", "е"], ["ж", "з"]],
                                       page_title=C_TITLE))
    # page D: one 6x6 headerless
    d = [[f"к{r}{c}" for c in range(6)] for r in range(6)]
    tables.append(table_from_texts(40, 0, d, page_title=D_TITLE))
    assert len(tables) == 25
    return tables


@pytest.fixture(scope="module")
def ranking_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("ranking")
    build_corpus(root, designed_ranking_tables())
    return root


class TestComputeStats:
    def test_hand_counts_on_designed_corpus(self, ranking_corpus):
        stats = compute_stats(ranking_corpus)
        assert stats.tables_total == 25
        assert stats.pages_total == 4
        assert stats.rows_total == 96
        assert stats.columns_total == 96
        assert stats.cells_total == 380
        assert stats.avg_tables_per_page == pytest.approx(6.25)
        assert stats.avg_cells_per_table == pytest.approx(380 / 25)

    def test_matches_oracle_on_designed_corpus(self, ranking_corpus):
        stats = compute_stats(ranking_corpus).to_json_dict()
        expected = stats_oracle.compute(ranking_corpus)
        for key, value in expected.items():
            if isinstance(value, int):
                assert stats[key] == value, key
            else:
                assert stats[key] == pytest.approx(value, rel=1e-9), key

    def test_empty_corpus_is_flagged(self, tmp_path):
        build_corpus(tmp_path / "empty", [], extra_pages=[PageRef(1, "Пустая")])
        stats = compute_stats(tmp_path / "empty")
        assert stats.empty
        assert stats.tables_total == 0
        assert stats.pages_total == 1
        assert stats.avg_cells_per_table == 0.0

    def test_missing_manifest_errors(self, tmp_path):
        with pytest.raises(CorpusError):
            compute_stats(tmp_path / "nothing")

    def test_unreadable_table_tallied_not_fatal(self, ranking_corpus, tmp_path):
        import shutil

        root = tmp_path / "damaged"
        shutil.copytree(ranking_corpus, root)
        victim = next((root / "tables").rglob("*.csv"))
        victim.unlink()
        stats = compute_stats(root)
        assert stats.unreadable_tables == 1
        assert stats.tables_total == 24

    def test_identity_filter_config_equals_no_config(self, ranking_corpus):
        assert compute_stats(ranking_corpus, FilterConfig()) == compute_stats(ranking_corpus)

    def test_filtered_stats_drop_tables(self, ranking_corpus):
        stats = compute_stats(ranking_corpus, FilterConfig(min_rows=3, min_cols=5))
        assert stats.tables_total == 10  # 5 from A, 4 from B, 1 from D


class TestOracleEquivalence:
    def test_100_random_corpora(self, tmp_path):
        rng = random.Random(20220913)
        for run in range(100):
            root = tmp_path / f"c{run:03d}"
            tables, extra = random_corpus_tables(rng, n_tables=30)
            build_corpus(root, tables, extra)
            mine = compute_stats(root).to_json_dict()
            expected = stats_oracle.compute(root)
            for key, value in expected.items():
                if isinstance(value, int):
                    assert mine[key] == value, f"run {run}: {key}"
                else:
                    assert mine[key] == pytest.approx(value, rel=1e-9), f"run {run}: {key}"


class TestSizeHistogram:
    def test_designed_ranking(self, ranking_corpus):
        top = size_histogram(ranking_corpus, 3)
        assert top == [("2x2", 7), ("3x5", 6), ("5x4", 5)]

    def test_full_ranking_and_tie_order(self, ranking_corpus):
        top = size_histogram(ranking_corpus, 10)
        assert top == [
            ("2x2", 7), ("3x5", 6), ("5x4", 5), ("5x3", 4),
            ("4x12", 1), ("6x6", 1), ("9x2", 1),
        ]

    def test_top_zero_empty(self, ranking_corpus):
        assert size_histogram(ranking_corpus, 0) == []

    def test_conservation(self, ranking_corpus):
        total = sum(n for _, n in size_histogram(ranking_corpus, 10_000))
        assert total == compute_stats(ranking_corpus).tables_total

    def test_marginals(self, ranking_corpus):
        rows, cols = row_column_marginals(ranking_corpus)
        assert dict(rows)[2] == 3 + 1 + 4  # 2-row tables: A small, C0, C small
        assert dict(cols)[5] == 9  # five A tables + four B tables
        assert sum(n for _, n in rows) == 25
        assert sum(n for _, n in cols) == 25


class TestHeaderFrequency:
    def test_trivial_digit_headers_filtered(self, ranking_corpus):
        top = header_frequency(ranking_corpus, 5, filter_trivial=True)
        assert top == [
            ("Год", 16), ("Игры", 9), ("Очки", 9), ("Команда", 5), ("Место", 5),
        ]

    def test_raw_ranking_keeps_digits(self, ranking_corpus):
        top = header_frequency(ranking_corpus, 5, filter_trivial=False)
        assert top == [("Год", 16), ("Игры", 9), ("Очки", 9), ("1", 7), ("2", 7)]

    def test_corpus_without_headers(self, tmp_path):
        build_corpus(
            tmp_path / "nh",
            [table_from_texts(1, 0, [["a", "b"], ["c", "d"]])],
        )
        assert header_frequency(tmp_path / "nh", 10) == []


class TestRichPages:
    def test_unfiltered(self, ranking_corpus):
        assert table_rich_pages(ranking_corpus, 10) == [
            (B_TITLE, 10), (A_TITLE, 8), (C_TITLE, 6), (D_TITLE, 1),
        ]

    def test_filtered_rows3_cols5(self, ranking_corpus):
        assert table_rich_pages(ranking_corpus, 10, min_rows=3, min_cols=5) == [
            (A_TITLE, 5), (B_TITLE, 4), (D_TITLE, 1),
        ]

    def test_threshold_excludes_everything(self, ranking_corpus):
        assert table_rich_pages(ranking_corpus, 10, min_rows=100, min_cols=1) == []


class TestSuperlatives:
    def test_designed_answers(self, ranking_corpus):
        result = superlatives(ranking_corpus)
        assert result["widest"] == {
            "page_id": 30, "offset": 0, "page_title": C_TITLE, "value": 9,
        }
        assert result["most_cells"] == {
            "page_id": 30, "offset": 1, "page_title": C_TITLE, "value": 48,
        }
        assert result["longest_cells"] == result["most_cells"]
        assert result["most_characters"] == {
            "page_id": 30, "offset": 1, "page_title": C_TITLE, "value": 463,
        }

    def test_single_table_wins_everything(self, tmp_path):
        build_corpus(
            tmp_path / "one", [table_from_texts(5, 0, [["аб", "в"], ["г", "д"]])]
        )
        result = superlatives(tmp_path / "one")
        assert {v["page_id"] for v in result.values()} == {5}
        assert result["widest"]["value"] == 2
        assert result["most_cells"]["value"] == 4
        assert result["most_characters"]["value"] == 5

    def test_ties_break_by_smallest_table_id(self, tmp_path):
        tables = [
            table_from_texts(7, 1, [["a", "b"]], page_title="Семь"),
            table_from_texts(7, 0, [["c", "d"]], page_title="Семь"),
            table_from_texts(3, 2, [["e", "f"]], page_title="Три"),
        ]
        build_corpus(tmp_path / "ties", tables)
        result = superlatives(tmp_path / "ties")
        assert result["widest"]["page_id"] == 3
        assert result["widest"]["offset"] == 2

    def test_empty_corpus(self, tmp_path):
        build_corpus(tmp_path / "e", [], extra_pages=[PageRef(1, "П")])
        assert superlatives(tmp_path / "e")["widest"] is None


@pytest.fixture(scope="module")
def search_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("search")
    build_corpus(root, designed_ranking_tables())
    return root


class TestSearch:
    def test_title_and_cols_conjunction(self, search_corpus):
        result = search(
            search_corpus, QuerySpec(title_substring="чемпионат", min_cols=5)
        )
        assert result.total_matches == 5  # the five 5x4 tables on page A
        assert all(m.page_title == A_TITLE for m in result.items)
        assert all(m.n_cols >= 5 for m in result.items)

    def test_case_insensitive_match(self, search_corpus):
        lower = search(search_corpus, QuerySpec(title_substring="ЧЕМПИОНАТ"))
        assert lower.total_matches == 8  # every page-A table

    def test_empty_query_pages_through_everything(self, search_corpus):
        first = search(search_corpus, QuerySpec(limit=10))
        assert first.total_matches == 25
        assert len(first.items) == 10
        second = search(search_corpus, QuerySpec(limit=10, offset=10))
        ids = {(m.table_id.page_id, m.table_id.offset) for m in first.items}
        ids2 = {(m.table_id.page_id, m.table_id.offset) for m in second.items}
        assert not ids & ids2

    def test_deterministic_order_by_table_id(self, search_corpus):
        result = search(search_corpus, QuerySpec(limit=25))
        keys = [(m.table_id.page_id, m.table_id.offset) for m in result.items]
        assert keys == sorted(keys)

    def test_caption_substring(self, search_corpus):
        result = search(search_corpus, QuerySpec(caption_substring="крупные"))
        assert result.total_matches == 1
        assert result.items[0].table_id.page_id == 30

    def test_has_numeric_column(self, search_corpus):
        with_numeric = search(
            search_corpus, QuerySpec(has_numeric_column=True, limit=100)
        )
        without = search(
            search_corpus, QuerySpec(has_numeric_column=False, limit=100)
        )
        assert with_numeric.total_matches + without.total_matches == 25
        assert all(any(m.column_numeric) for m in with_numeric.items)

    def test_inconsistent_bounds_rejected(self, search_corpus):
        with pytest.raises(ValidationError) as err:
            search(search_corpus, QuerySpec(min_rows=10, max_rows=5))
        assert "min_rows" in err.value.fields

    def test_soundness_and_completeness_vs_bruteforce(self, search_corpus):
        from tablecorpus.store import CorpusStore

        q = QuerySpec(min_rows=3, max_cols=5, limit=100)
        result = search(search_corpus, q)
        store = CorpusStore(search_corpus)
        brute = [
            store.read_metadata(tid)
            for tid in store.iter_table_ids()
            if 3 <= store.read_metadata(tid).n_rows
            and store.read_metadata(tid).n_cols <= 5
        ]
        assert {(m.table_id.page_id, m.table_id.offset) for m in result.items} == {
            (m.table_id.page_id, m.table_id.offset) for m in brute
        }


class TestPlantedCyrillicColumns:
    def test_exactly_three_percent(self, tmp_path):
        # 25 tables x 4 columns = 100 columns; exactly 3 are Cyrillic-only
        tables = []
        for i in range(25):
            texts = []
            for r in range(3):
                row = [f"{i}{r}", "alpha", f"7a{r}", f"{r} 000"]
                if i < 3:
                    row[3] = ["год", "место", "сезон"][r]
                texts.append(row)
            tables.append(table_from_texts(100 + i, 0, texts, page_title=f"С {i}"))
        root = tmp_path / "planted"
        build_corpus(root, tables)
        stats = compute_stats(root)
        assert stats.columns_total == 100
        assert stats.pct_cyrillic_only_columns == pytest.approx(3.0)
        # cross-check with the oracle
        assert stats_oracle.compute(root)["pct_cyrillic_only_columns"] == pytest.approx(3.0)


class TestReports:
    def test_report_files_written(self, ranking_corpus):
        reports = write_reports(ranking_corpus, top_n=5)
        for name in [
            "stats.json", "size_histogram.tsv", "row_distribution.tsv",
            "column_distribution.tsv", "header_frequency.tsv",
            "header_frequency_raw.tsv", "table_rich_pages.tsv",
            "table_rich_pages_filtered.tsv", "superlatives.json",
        ]:
            assert (reports / name).exists(), name
        first = (reports / "size_histogram.tsv").read_text(encoding="utf-8").splitlines()[0]
        assert first == "2x2\t7"

    def test_render_lines_rounding(self, ranking_corpus):
        lines = render_stats_lines(compute_stats(ranking_corpus))
        assert any(line.startswith("Avg number of tables per page: 6.25") for line in lines)
        assert any("%" in line for line in lines)
