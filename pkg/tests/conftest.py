import pytest


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, summary_lines

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in summary_lines():
        terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _no_leaked_numpy_errors():
    import numpy as np

    with np.errstate(all="raise"):
        yield
