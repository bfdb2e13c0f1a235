import pytest

from catheval import fixtures


@pytest.fixture(scope="session")
def test_truth():
    return fixtures.paper_test_truth()


@pytest.fixture(scope="session")
def test_scores_multi():
    return fixtures.paper_test_scores_multilabel()


@pytest.fixture(scope="session")
def test_scores_single():
    return fixtures.paper_test_scores_singlelabel()


@pytest.fixture(scope="session")
def val_truth():
    return fixtures.paper_validation_truth()


@pytest.fixture(scope="session")
def val_scores():
    return fixtures.paper_validation_scores()
