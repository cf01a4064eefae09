"""Shared store for the one-line acceptance verdicts."""
LINES: list = []


def record(number: int, title: str, passed: bool, detail: str = "") -> str:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    LINES.append(line)
    print(line)
    return line
