"""Formatting helpers for terminal output."""


def fmt_rate(value: float) -> str:
    """Swap rate in basis points: 0.01234 -> '123.40 bp'."""
    return f"{value * 1e4:.2f} bp"


def fmt_float(value: float | None, digits: int = 6) -> str:
    """Compact float; '-' for missing values."""
    if value is None:
        return "-"
    return f"{value:.{digits}g}"


def fmt_table(headers: list[str], rows: list[list[str]]) -> str:
    """Left-aligned plain-text table."""
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)
