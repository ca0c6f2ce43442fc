#!/usr/bin/env python3
"""End-to-end checks of the spdc-focal command line.

usage: test_cli.py <spdc-focal binary> <configs dir>
"""

import os
import re
import subprocess
import sys
import tempfile

BINARY = sys.argv[1]
CONFIGS = sys.argv[2]
failures = []


def check(ok, what):
    print(("ok   " if ok else "FAIL ") + what)
    if not ok:
        failures.append(what)


def run(*args):
    return subprocess.run([BINARY, *args], capture_output=True, text=True)


def shipped(name):
    with open(os.path.join(CONFIGS, name)) as f:
        return f.read()


def write(tmp, name, text):
    path = os.path.join(tmp, name)
    with open(path, "w") as f:
        f.write(text)
    return path


def rows(csv_text):
    lines = [l for l in csv_text.splitlines() if l and not l.startswith("#")]
    return lines[0].split(","), [l.split(",") for l in lines[1:]]


def echoed_config(csv_text):
    out, inside = [], False
    for line in csv_text.splitlines():
        if line == "# --- config ---":
            inside = True
        elif line == "# --- end config ---":
            break
        elif inside:
            out.append(line[2:])
    return "\n".join(out) + "\n"


with tempfile.TemporaryDirectory() as tmp:
    # Reduced grids keep the suite fast; the physics matches the shipped files.
    small = {
        "map": write(tmp, "map.yaml", shipped("focal_map.yaml").replace("count: 41", "count: 9")),
        "focus-scan": write(tmp, "focus.yaml", shipped("focus_scan.yaml").replace("count: 121", "count: 31")),
        "spectrum": write(tmp, "spectrum.yaml", shipped("spectrum.yaml").replace("count: 401", "count: 81")),
        "brightness": os.path.join(CONFIGS, "brightness.yaml"),
        "optimize": write(tmp, "optimize.yaml", shipped("optimize.yaml").replace("count: 11", "count: 3")),
        "modes": os.path.join(CONFIGS, "mode_distribution.yaml"),
        "purity": write(tmp, "purity.yaml", re.sub(r"start: -10 mm, stop: 10 mm, count: 21",
                                                  "start: 0 mm, stop: 0 mm, count: 1",
                                                  shipped("purity_map.yaml"))),
        "oracle-check": os.path.join(CONFIGS, "oracle_check.yaml"),
    }
    expected_columns = {
        "map": ["z_s_m", "z_i_m", "probability", "normalized"],
        "focus-scan": ["z_p_m", "probability", "normalized"],
        "spectrum": ["lambda_s_m", "probability", "normalized"],
        "brightness": ["peak_wavelength_m", "peak_value", "normalized", "edge"],
        "optimize": ["z_p_m", "z_s_max_m", "value", "normalized", "ok", "status"],
        "modes": ["signal_p", "signal_l", "idler_p", "idler_l", "probability", "normalized"],
        "purity": ["z_p_m", "z_si_m", "purity"],
        "oracle-check": ["signal_p", "signal_l", "idler_p", "idler_l", "closed_form", "oracle",
                         "deviation"],
    }

    outputs = {}
    for cmd, cfg in small.items():
        r = run(cmd, "--config", cfg)
        check(r.returncode == 0, f"{cmd} exits 0 ({r.stderr.strip()[:200]})")
        outputs[cmd] = r.stdout
        head = r.stdout.splitlines()[:2]
        check(len(head) == 2 and re.match(r"# spdc-focal \S+ " + re.escape(cmd) + "$", head[0]) is not None,
              f"{cmd} header names tool, version and subcommand")
        check(head[1].startswith("# resolved poling_period: "), f"{cmd} header resolves the poling period")
        if r.returncode == 0:
            cols, body = rows(r.stdout)
            check(cols == expected_columns[cmd], f"{cmd} columns {cols}")
            check(len(body) > 0 and all(len(b) == len(cols) for b in body), f"{cmd} rows are complete")

    _, body = rows(outputs["map"])
    check(len(body) == 81, "map has one row per grid cell")
    _, body = rows(outputs["oracle-check"])
    check(all(float(b[-1]) < 1e-6 for b in body), "oracle-check deviations are small")
    _, body = rows(outputs["purity"])
    check(len(body) == 1 and 0.0 < float(body[0][2]) <= 1.0, "purity lies in (0, 1]")

    r = run("map", "--config", small["map"], "--normalize", "none")
    check(rows(r.stdout)[0] == ["z_s_m", "z_i_m", "probability"], "normalize none drops the column")

    # Thread count does not change the output.
    for cmd in ("map", "modes", "optimize"):
        a = run(cmd, "--config", small[cmd], "--threads", "1").stdout
        b = run(cmd, "--config", small[cmd], "--threads", "3").stdout
        check(a == b, f"{cmd} output identical for 1 and 3 threads")

    # The echoed configuration reproduces the run.
    for cmd in ("map", "spectrum", "modes"):
        echo = write(tmp, f"echo_{cmd}.yaml", echoed_config(outputs[cmd]))
        again = run(cmd, "--config", echo).stdout
        check(again == outputs[cmd], f"{cmd} re-run from its echoed config is bit-identical")

    # Atomic output file, no temporaries left behind.
    out_dir = os.path.join(tmp, "out")
    os.mkdir(out_dir)
    target = os.path.join(out_dir, "map.csv")
    with open(target, "w") as f:
        f.write("stale\n")
    r = run("map", "--config", small["map"], "--out", target)
    check(r.returncode == 0 and r.stdout == "", "--out writes nothing to stdout")
    with open(target) as f:
        check(f.read() == outputs["map"], "--out file equals stdout output")
    check(os.listdir(out_dir) == ["map.csv"], "no temporary files remain")

    # Errors.
    bad_unit = write(tmp, "bad_unit.yaml", shipped("focal_map.yaml").replace("length: 1 mm", "length: 10mmm"))
    r = run("map", "--config", bad_unit)
    check(r.returncode == 2, "malformed unit exits 2")
    check(re.search(r"line 3.*column 11", r.stderr) is not None, f"error names line and column: {r.stderr.strip()}")

    no_unit = write(tmp, "no_unit.yaml", shipped("focal_map.yaml").replace("waist: 10 um\n  focal_shift", "waist: 10\n  focal_shift"))
    r = run("map", "--config", no_unit)
    check(r.returncode == 2 and "unit" in r.stderr, "missing unit exits 2")

    unknown = write(tmp, "unknown.yaml", shipped("focal_map.yaml") + "colour: blue\n")
    r = run("map", "--config", unknown)
    check(r.returncode == 2 and "colour" in r.stderr, "unknown key exits 2 and names it")

    empty = write(tmp, "empty_axis.yaml", shipped("focal_map.yaml").replace(
        "{variable: z_i, start: -2 mm, stop: 2 mm, count: 41}",
        "{variable: z_i, start: -2 mm, stop: 2 mm, count: 0}"))
    r = run("map", "--config", empty)
    check(r.returncode == 2, "empty scan axis exits 2")

    r = run("focus-scan", "--config", small["map"])
    check(r.returncode == 2 and "z_s" in r.stderr, "disallowed axis exits 2 and names it")

    r = run("focus-scan", "--config", small["oracle-check"])
    check(r.returncode == 2 and "z_p" in r.stderr, "missing axis exits 2 and names it")

    r = run("map", "--config", os.path.join(tmp, "does_not_exist.yaml"))
    check(r.returncode == 2, "missing config file exits 2")

    r = run("spectrum", "--config", small["spectrum"], "--normalize", "sometimes")
    check(r.returncode == 2, "bad option value exits 2")

    r = run("purity", "--config", small["map"])
    check(r.returncode == 2, "purity on a CW configuration exits 2")

    r = run("--help")
    check(r.returncode == 0 and "map" in r.stdout, "--help lists subcommands")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
