import pytest

from brepkit.cli import main


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    assert main(["fixtures", str(out)]) == 0
    return out


@pytest.fixture()
def box_path(corpus_dir):
    return corpus_dir / "box.hdf5"
