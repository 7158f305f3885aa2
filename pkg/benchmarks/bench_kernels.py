#!/usr/bin/env python3
"""Standalone kernel-backend benchmark; also reachable as `glyphforge bench`."""

from glyphforge.benchmark import run_benchmark

if __name__ == "__main__":
    for line in run_benchmark(repeats=5):
        print(line)
