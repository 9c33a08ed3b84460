from hypothesis import settings

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=60)
settings.load_profile("repo")


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, check in sorted(test_acceptance.RESULTS.items()):
        terminalreporter.write_line(f"criterion {number:2d}: {check.line()}")
        for key, value in check.details.items():
            if key != "per_config":
                terminalreporter.write_line(f"    {key}: {value}")
