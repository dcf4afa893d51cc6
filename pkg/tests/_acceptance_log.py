"""Collects one summary line per acceptance criterion for the terminal report."""

LINES: dict[int, str] = {}


def record(number: int, passed: bool, summary: str) -> str:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} | {summary}"
    LINES[number] = line
    print(line)
    return line
