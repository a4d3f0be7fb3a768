import contextlib
import time

RESULTS = []


@contextlib.contextmanager
def criterion(number, title):
    """Record a one-line verdict for an acceptance criterion, whatever happens inside."""
    state = {"detail": ""}
    start = time.perf_counter()
    try:
        yield state
    except BaseException:
        RESULTS.append(f"criterion {number:>2} FAIL  {title}  {state['detail']}".rstrip())
        print(RESULTS[-1])
        raise
    elapsed = time.perf_counter() - start
    RESULTS.append(f"criterion {number:>2} PASS  {title}  {state['detail']} [{elapsed:.1f}s]")
    print(RESULTS[-1])


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
