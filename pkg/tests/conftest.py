import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ltagbench.grammar import load_grammar

DATA = Path(__file__).parent.parent / "src" / "ltagbench" / "data"


@pytest.fixture(scope="session")
def sample_grammar():
    return load_grammar((DATA / "sample_grammar.ltag").read_text())


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def copy_sample_workspace(tmp_path: Path):
    """Writable copy of the bundled workspace; returns its PipelineConfig."""
    from ltagbench.pipeline import PipelineConfig

    for name in [
        "sample_grammar.ltag", "sample.morph", "sample.synt", "sample.stats",
        "sample.tagger", "morph_rules.json", "infl_features.json", "tokenizer.json",
    ]:
        shutil.copy(DATA / name, tmp_path / name)
    return PipelineConfig(
        grammar_path=str(tmp_path / "sample_grammar.ltag"),
        morph_path=str(tmp_path / "sample.morph"),
        synt_path=str(tmp_path / "sample.synt"),
        stats_path=str(tmp_path / "sample.stats"),
        tagger_model_path=str(tmp_path / "sample.tagger"),
        morph_rules_path=str(tmp_path / "morph_rules.json"),
        infl_map_path=str(tmp_path / "infl_features.json"),
        tokenizer_path=str(tmp_path / "tokenizer.json"),
    )


@pytest.fixture()
def tmp_workspace_config(tmp_path):
    return copy_sample_workspace(tmp_path)


@pytest.fixture(scope="session")
def sample_workspace():
    from ltagbench.pipeline import PipelineConfig, Workspace

    return Workspace(PipelineConfig.sample())
