"""Configurable in-repo worker for exercising the line-delimited JSON
objective protocol without external dependencies.

Modes:
  compute    deterministic quadratic of the three tuning parameters
  echo42     always answers fitness 0.42
  silent     reads requests but never answers
  malformed  answers with a non-JSON line
  error      answers {"id", "error"}
  badid      answers with a shifted id
  crash      exits non-zero after the first request
"""

import argparse
import json
import sys


def compute_fitness(params):
    b = float(params["batch_size"])
    r = float(params["dropout_rate"])
    n = float(params["neurons"])
    return 0.2 + ((b - 20) / 63.0) ** 2 + (r - 0.4) ** 2 + ((n - 150) / 450.0) ** 2


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--mode", default="compute")
    mode = parser.parse_args().mode
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        request = json.loads(line)
        rid = request["id"]
        if mode == "silent":
            continue
        if mode == "malformed":
            print("this is not json", flush=True)
            continue
        if mode == "error":
            print(json.dumps({"id": rid, "error": "boom"}), flush=True)
            continue
        if mode == "badid":
            print(json.dumps({"id": rid + 1, "fitness": 0.0}), flush=True)
            continue
        if mode == "crash":
            sys.exit(3)
        fitness = 0.42 if mode == "echo42" else compute_fitness(request["params"])
        print(json.dumps({"id": rid, "fitness": fitness}), flush=True)
    sys.exit(0)


if __name__ == "__main__":
    main()
