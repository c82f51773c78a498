"""Content fingerprints for run configs."""

import hashlib


def config_fingerprint(content: bytes) -> str:
    """Git-style blob id: sha1 of b"blob <len>\\0" + content.

    Matches ``git hash-object`` for the same file.
    """
    header = f"blob {len(content)}\0".encode()
    return hashlib.sha1(header + content).hexdigest()
