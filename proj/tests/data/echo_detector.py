#!/usr/bin/env python3
"""Toy external detector: reads binary PPM frames from stdin and answers one
JSON line of detections per frame."""

import json
import sys


def read_token(stream):
    token = b""
    while True:
        ch = stream.read(1)
        if not ch:
            return None
        if ch == b"#":
            while ch and ch != b"\n":
                ch = stream.read(1)
            continue
        if ch.isspace():
            if token:
                return token
            continue
        token += ch


def main():
    stdin = sys.stdin.buffer
    while True:
        magic = read_token(stdin)
        if magic is None:
            return
        if magic != b"P6":
            raise SystemExit(f"unexpected magic {magic!r}")
        width = int(read_token(stdin))
        height = int(read_token(stdin))
        int(read_token(stdin))  # maxval
        payload = stdin.read(width * height * 3)
        if len(payload) != width * height * 3:
            return
        detections = [
            {"x": 1.0, "y": 2.0, "w": 3.0, "h": 4.0, "label": "obj", "confidence": 0.5}
        ]
        sys.stdout.write(json.dumps(detections) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
