"""Deterministic structured-text report writer.

One human-readable key/value format for every report: nested maps by
indentation, lists of maps as "-" blocks, scalar lists inline.  Complex
numbers are written as [re, im]; floats with full round-trip precision.
The output is a pure function of the data, so identical runs produce
byte-identical files.
"""

import numpy as np

SCHEMA_VERSION = 1


def format_scalar(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (complex, np.complexfloating)):
        return "[%s, %s]" % (repr(float(v.real)), repr(float(v.imag)))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def emit_lines(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, val in obj.items():
            if isinstance(val, dict):
                lines.append("%s%s:" % (pad, key))
                lines.extend(emit_lines(val, indent + 1))
            elif isinstance(val, list) and val \
                    and isinstance(val[0], (dict, list)):
                lines.append("%s%s:" % (pad, key))
                for item in val:
                    sub = emit_lines(item, indent + 2)
                    sub[0] = "%s- %s" % ("  " * (indent + 1),
                                         sub[0].lstrip())
                    lines.extend(sub)
            elif isinstance(val, list):
                lines.append("%s%s: [%s]" % (
                    pad, key, ", ".join(format_scalar(x) for x in val)))
            else:
                lines.append("%s%s: %s" % (pad, key, format_scalar(val)))
        return lines
    if isinstance(obj, list):
        for item in obj:
            lines.append("%s- %s" % (pad, format_scalar(item)))
        return lines
    return ["%s%s" % (pad, format_scalar(obj))]


def dump_report(data, path):
    """Write a report dict, schema-versioned, trailing newline."""
    body = {"schema_version": SCHEMA_VERSION}
    body.update(data)
    with open(path, "w") as fh:
        fh.write("\n".join(emit_lines(body)) + "\n")


def dump_csv(header, rows, path):
    """Plot-ready table: header row then full-precision data rows."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_scalar(x) if not isinstance(x, str)
                              else x for x in row) + "\n")
