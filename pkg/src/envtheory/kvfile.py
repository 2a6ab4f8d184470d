"""Line-oriented key = value files with [section] headers.

This one format serves both the bundled reference tables and the CLI's
system-definition files: no nesting, `#` comments, values kept as strings
until a consumer interprets them.
"""

from __future__ import annotations

from .errors import InputError

__all__ = ["parse_sections"]


def parse_sections(text: str) -> dict[str, dict[str, str]]:
    """Parse sections in file order; duplicate keys within a section are errors."""
    sections: dict[str, dict[str, str]] = {}
    current: dict[str, str] | None = None
    name = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise InputError(f"line {lineno}: empty section name")
            if name in sections:
                raise InputError(f"line {lineno}: duplicate section [{name}]")
            current = {}
            sections[name] = current
            continue
        if "=" not in line:
            raise InputError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if current is None:
            raise InputError(f"line {lineno}: key outside any [section]")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise InputError(f"line {lineno}: empty key or value")
        if key in current:
            raise InputError(f"line {lineno}: duplicate key {key!r} in [{name}]")
        current[key] = value
    return sections
