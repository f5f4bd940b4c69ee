import json
import os
from pathlib import Path

import pytest

from townhall.errors import ParseError
from townhall.evaluation import (
    CorpusEntry,
    load_ami_style_corpus,
    load_corpus_dir,
    run_ablation,
)
from townhall.model import canonical_json
from townhall.summarize import SelectionConfig

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def corpus():
    return load_corpus_dir(DATA / "corpus")


class TestRunAblation:
    def test_all_three_rows_present(self, corpus):
        report = run_ablation(corpus, corpus_id="bundled-3fx")
        assert set(report.rows) == {"bm25", "cosine", "vanilla"}
        for scores in report.rows.values():
            assert set(scores) == {"rouge_1", "rouge_2"}

    def test_matches_frozen_golden(self, corpus):
        report = run_ablation(corpus, corpus_id="bundled-3fx")
        golden = json.loads((DATA / "ablation_golden.json").read_text())
        assert canonical_json(report.to_doc()) == canonical_json(golden)

    def test_identity_pipeline_scores_one(self, corpus):
        entry = corpus[0]
        full_text = " ".join(s.raw_text for s in entry.sentences)
        report = run_ablation(
            [CorpusEntry("ident", entry.sentences, full_text)],
            sel=SelectionConfig(budget_ratio=1.0),
        )
        for scores in report.rows.values():
            assert scores["rouge_1"].f1 == pytest.approx(1.0, abs=1e-12)

    def test_invariant_to_corpus_order(self, corpus):
        forward = run_ablation(corpus, corpus_id="c")
        backward = run_ablation(list(reversed(corpus)), corpus_id="c")
        assert canonical_json(forward.to_doc()) == canonical_json(backward.to_doc())

    def test_missing_reference_errors(self, tmp_path):
        (tmp_path / "x.transcript.json").write_text('{"sentences":[]}')
        with pytest.raises(ParseError, match="missing reference"):
            load_corpus_dir(tmp_path)

    def test_empty_corpus_errors(self):
        with pytest.raises(ValueError):
            run_ablation([])


@pytest.mark.skipif("AMI_DIR" not in os.environ, reason="set AMI_DIR to a local benchmark corpus")
class TestOptionalBenchmark:
    def test_bm25_beats_vanilla_on_rouge1_f1(self):
        entries = load_ami_style_corpus(Path(os.environ["AMI_DIR"]))
        report = run_ablation(entries, corpus_id="ami")
        assert report.rows["bm25"]["rouge_1"].f1 >= report.rows["vanilla"]["rouge_1"].f1
