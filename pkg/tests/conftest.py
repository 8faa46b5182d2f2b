def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        verdict, detail = RESULTS[n]
        terminalreporter.write_line(f"Criterion {n}: {verdict}  {detail}")
