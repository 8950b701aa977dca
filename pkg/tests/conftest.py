import pytest

from ruletag import data_path, parse_lexicon, parse_rule_file

TESTS_DATA = __file__.rsplit("/", 1)[0] + "/data"


@pytest.fixture(scope="session")
def demo_rules():
    return parse_rule_file(data_path("turkish_demo.mr").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def weak_rules():
    with open(f"{TESTS_DATA}/weak.mr", encoding="utf-8") as handle:
        return parse_rule_file(handle.read())


@pytest.fixture(scope="session")
def sample_lexicon():
    return parse_lexicon(
        data_path("turkish_sample.lex").read_text(encoding="utf-8"), name="sample"
    )


@pytest.fixture(scope="session")
def sample_text():
    return data_path("turkish_sample.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def sample_gold_text():
    return data_path("turkish_sample_gold.tsv").read_text(encoding="utf-8")
