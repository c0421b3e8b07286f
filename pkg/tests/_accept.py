"""Shared acceptance-criterion reporting: one line per criterion,
echoed in the pytest terminal summary by conftest."""

lines = []


def report(number, title, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {number} [{title}]: {status}"
    if detail:
        line += f" — {detail}"
    lines.append(line)
    print(line)
    return ok
