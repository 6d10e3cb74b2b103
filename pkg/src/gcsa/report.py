"""Aligned text rendering of analysis reports."""

HEADERS = ("ColumnSize(J)", "Rank(J)", "DOR", "Matched?")


def _mark(flag):
    return "✓" if flag else "✗"


def format_table(reports):
    """Render reports in two column groups: fixed DOR = 6, and computed DOR."""
    rows = []
    for r in reports:
        rows.append([r.name or "-",
                     str(r.column_size), str(r.rank), "6", _mark(r.plain_matched),
                     str(r.column_size), str(r.rank), str(r.dor), _mark(r.matched)])
    head = ["Model", *HEADERS, *HEADERS]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
              for i, h in enumerate(head)]
    group_w = sum(widths[1:5]) + 3 * 2
    lines = [" " * widths[0] + "  " + "Without DOR".center(group_w) + "  " + "With DOR".center(group_w)]
    lines.append("  ".join(h.ljust(w) for h, w in zip(head, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines)


def format_details(report):
    return (f"{report.name or 'model'}: rows={report.row_size} "
            f"(built-in dependencies {report.implicit_dependencies}), "
            f"kernel={report.kernel_dim}, aux columns={report.aux_columns}, "
            f"plain={report.plain_state.value}, with DOR={report.dor_state.value}, "
            f"tol={report.tol_used:.3g}")
