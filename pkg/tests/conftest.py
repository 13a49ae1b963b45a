def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for index in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[index])
