import pytest

from prosomark.config import Config
from prosomark.lexica import data_path
from prosomark.pipeline import run_pipeline

FIXTURES = data_path("fixtures")


def load(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def config():
    return Config().load_lexica()


@pytest.fixture(scope="session")
def fable_result():
    cfg = Config().load_lexica()
    return run_pipeline(load("belling_cat.txt"), load("belling_cat.ann"), cfg)


@pytest.fixture(scope="session")
def fox_result():
    cfg = Config().load_lexica()
    return run_pipeline(load("fox_crow.txt"), load("fox_crow.ann"), cfg)


@pytest.fixture(scope="session")
def fox_nopov_result():
    cfg = Config().load_lexica()
    cfg.pov_tracking = False
    return run_pipeline(load("fox_crow.txt"), load("fox_crow.ann"), cfg)
