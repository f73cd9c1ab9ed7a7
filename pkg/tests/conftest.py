import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# criterion id -> list of (ok, detail), filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[cid]
        ok = all(c for c, _ in checks)
        terminalreporter.write_line(f"criterion {cid}: {'PASS' if ok else 'FAIL'} ({sum(c for c, _ in checks)}/{len(checks)} checks)")
        for c, detail in checks:
            if not c:
                terminalreporter.write_line(f"    failed: {detail}")
