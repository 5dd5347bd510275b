#!/usr/bin/env python3
# Copyright 2026 The wfsynth Authors
# SPDX-License-Identifier: Apache-2.0
"""Minimal sandbox runner for client tests: one JSON request per input line,
one JSON verdict per output line. Two magic programs simulate runner faults:
"__CRASH__" exits the process and "__GARBAGE__" prints a non-JSON line."""

import argparse
import contextlib
import io
import json
import os
import signal
import sys
import time
import traceback


class Timeout(Exception):
    pass


def on_alarm(signum, frame):
    raise Timeout()


def verdict(status, out="", err="", category=None, started=None):
    return {
        "status": status,
        "stdout": out,
        "stderr": err,
        "category": category,
        "duration_s": 0.0 if started is None else time.monotonic() - started,
    }


def run_case(req, default_timeout):
    started = time.monotonic()
    code = req.get("code", "")
    if code == "__CRASH__":
        os._exit(3)
    if code == "__GARBAGE__":
        return None
    timeout = float(req.get("timeout_s") or default_timeout)
    out = io.StringIO()
    namespace = {"__name__": "__sandbox__"}
    signal.setitimer(signal.ITIMER_REAL, timeout)
    try:
        with contextlib.redirect_stdout(out):
            exec(compile(code, "<candidate>", "exec"), namespace)
            if req.get("op") == "test":
                for test in req.get("tests", []):
                    exec(compile(test, "<test>", "exec"), namespace)
        return verdict("pass", out.getvalue(), started=started)
    except Timeout:
        return verdict("error", out.getvalue(), "timed out", "timeout", started)
    except ModuleNotFoundError as e:
        return verdict("error", out.getvalue(), f"ModuleNotFoundError: {e}", "env-missing-module", started)
    except AssertionError:
        return verdict("fail", out.getvalue(), traceback.format_exc(limit=1), "assertion", started)
    except BaseException:
        return verdict("error", out.getvalue(), traceback.format_exc(limit=1), "runtime-exception", started)
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-memory-mb", type=int, default=512)
    parser.add_argument("--default-timeout-s", type=float, default=10.0)
    args = parser.parse_args()
    signal.signal(signal.SIGALRM, on_alarm)
    for line in sys.stdin:
        try:
            req = json.loads(line)
        except ValueError as e:
            result = verdict("error", "", f"protocol error: {e}", "runtime-exception")
        else:
            result = run_case(req, args.default_timeout_s)
        if result is None:
            sys.stdout.write("this is not json\n")
        else:
            sys.stdout.write(json.dumps(result) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
