"""Objective backed by an external worker process.

Wire protocol, one JSON object per UTF-8 line over the worker's
stdin/stdout:

    request:  {"id": <uint>, "params": {"batch_size": 8, "dropout_rate": 0.1, "neurons": 110}}
    response: {"id": <uint>, "fitness": <finite number>}
              {"id": <uint>, "error": "<message>"}

The driver sends one request per worker at a time and expects responses in
arrival order. A worker must exit 0 when its stdin closes. Parameter names
and value types follow the search-space declaration exactly.
"""

from __future__ import annotations

import itertools
import json
import math
import queue
import subprocess
import threading

from .errors import ConfigError, EvaluationError, ProtocolError
from .space import ParamVector

_EOF = object()


class _Worker:
    """One subprocess plus a reader thread feeding a line queue."""

    def __init__(self, command):
        self.proc = subprocess.Popen(
            command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        self.lines: queue.Queue = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()

    def _pump(self):
        for line in self.proc.stdout:
            self.lines.put(line)
        self.lines.put(_EOF)

    def send(self, obj) -> None:
        try:
            self.proc.stdin.write(json.dumps(obj) + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ProtocolError(f"worker rejected request: {exc}") from exc

    def read_line(self, timeout: float) -> str:
        try:
            line = self.lines.get(timeout=timeout)
        except queue.Empty:
            raise EvaluationError(f"worker response timed out after {timeout}s") from None
        if line is _EOF:
            raise ProtocolError(
                f"worker exited before answering (status {self.proc.poll()})"
            )
        return line

    def kill(self):
        if self.proc.poll() is None:
            self.proc.kill()
        self.proc.wait()

    def close(self) -> int:
        """Signal end-of-input and wait; returns the exit status."""
        if self.proc.poll() is None:
            try:
                self.proc.stdin.close()
            except OSError:
                pass
        return self.proc.wait()


class ExternalObjective:
    """Fitness evaluated by a pool of worker processes.

    Up to ``parallelism`` workers are spawned lazily; each handles one
    request at a time, so concurrent evaluate() calls map onto distinct
    workers. Use as a context manager (or call close()) to shut the pool
    down cleanly.
    """

    def __init__(self, command, timeout: float = 30.0, parallelism: int = 1,
                 sense: str = "minimize", name: str = "external"):
        if not command:
            raise ConfigError("external objective needs a non-empty command")
        if not (timeout > 0):
            raise ConfigError(f"timeout must be positive, got {timeout}")
        if parallelism < 1:
            raise ConfigError(f"parallelism must be >= 1, got {parallelism}")
        self.command = list(command)
        self.timeout = timeout
        self.parallelism = parallelism
        self.sense = sense
        self.name = name
        self._ids = itertools.count(1)
        self._idle: queue.Queue = queue.Queue()
        self._spawned = 0
        self._lock = threading.Lock()
        self._closed = False

    def _acquire(self) -> _Worker:
        with self._lock:
            if self._closed:
                raise EvaluationError("objective already closed")
            if self._idle.empty() and self._spawned < self.parallelism:
                self._spawned += 1
                try:
                    return _Worker(self.command)
                except OSError as exc:
                    self._spawned -= 1
                    raise EvaluationError(f"cannot launch worker: {exc}") from exc
        return self._idle.get()

    def _discard(self, worker: _Worker):
        worker.kill()
        with self._lock:
            self._spawned -= 1

    def evaluate(self, params: ParamVector) -> float:
        request_id = next(self._ids)
        worker = self._acquire()
        try:
            worker.send({"id": request_id, "params": params.as_dict()})
            line = worker.read_line(self.timeout)
        except EvaluationError:
            self._discard(worker)
            raise
        try:
            response = json.loads(line)
        except json.JSONDecodeError as exc:
            self._discard(worker)
            raise ProtocolError(f"malformed response line: {line!r}") from exc
        # a desynchronized worker cannot be trusted for the next request
        if not isinstance(response, dict) or response.get("id") != request_id:
            self._discard(worker)
            raise ProtocolError(
                f"response id {response.get('id') if isinstance(response, dict) else None!r}"
                f" does not match request id {request_id}"
            )
        self._idle.put(worker)
        if "error" in response:
            raise EvaluationError(f"worker error: {response['error']}")
        fitness = response.get("fitness")
        if not isinstance(fitness, (int, float)) or isinstance(fitness, bool) \
                or not math.isfinite(fitness):
            raise ProtocolError(f"response fitness {fitness!r} is not a finite number")
        return float(fitness)

    def close(self) -> list[int]:
        """Close every worker's stdin and collect exit statuses."""
        with self._lock:
            self._closed = True
            count = self._spawned
            self._spawned = 0
        statuses = []
        for _ in range(count):
            try:
                worker = self._idle.get_nowait()
            except queue.Empty:
                break
            statuses.append(worker.close())
        return statuses

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()
        return False
