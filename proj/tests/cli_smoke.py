"""End-to-end check of the vsp command-line tool against the mock backend.

usage: cli_smoke.py <vsp executable> <source dir>
"""

import csv
import json
import pathlib
import subprocess
import sys
import tempfile


def main() -> int:
    exe, source = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
    data = source / "tests" / "data"

    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        (tmp / "vsp.toml").write_text(
            "[paths]\n"
            f'exemplar_dir = "{source / "data" / "exemplars"}"\n'
            'cache_dir = "cache"\n'
            "[model.mock-id]\n"
            f'endpoint = "mock://{data / "mock" / "identification_tp2_fp1_fn2_tn3.json"}"\n'
            "max_tokens = 16385\n"
            "[model.mock-patch]\n"
            f'endpoint = "mock://{data / "mock" / "patching_sard8.json"}"\n'
            "max_tokens = 16385\n"
            "[model.mock-disc]\n"
            f'endpoint = "mock://{data / "mock" / "discovery_sard8.json"}"\n'
            "max_tokens = 16385\n"
        )

        def vsp(*args, stdin=None, expect=0):
            proc = subprocess.run([str(exe), *args], cwd=tmp, input=stdin, capture_output=True, text=True)
            ok = proc.returncode != 0 if expect is None else proc.returncode == expect
            if not ok:
                raise SystemExit(
                    f"vsp {' '.join(args)} exited {proc.returncode}, wanted {expect}\n{proc.stdout}\n{proc.stderr}"
                )
            return proc.stdout

        def run_id(runs: str) -> str:
            ids = [p.name for p in (tmp / runs).iterdir() if p.is_dir()]
            assert len(ids) == 1, ids
            return ids[0]

        sard = str(data / "sard8")
        vsp("run", "--task", "id", "--strategy", "vsp", "--dataset", sard, "--model", "mock-id",
            "--out", "runs-id", "--timestamp", "20240101T000000Z")
        id_run = run_id("runs-id")
        summary = json.loads((tmp / "runs-id" / id_run / "summary.json").read_text())
        assert abs(summary["f1"] - 4 / 7) < 1e-9, summary

        vsp("run", "--task", "patch", "--strategy", "vsp", "--dataset", sard, "--model", "mock-patch",
            "--out", "runs-patch")
        patch_run = run_id("runs-patch")
        vsp("report", "--runs", patch_run, "--runs-root", "runs-patch", expect=1)
        vsp("review", "--run", patch_run, "--runs-root", "runs-patch", "--annotator", "smoke",
            stdin="c\nfine\nq\n", expect=3)
        out = vsp("review", "--run", patch_run, "--runs-root", "runs-patch", "--annotator", "smoke",
                  stdin="i\nwrong\nc\n\n")
        assert "0 pending" in out, out

        table = vsp("report", "--runs", str(tmp / "runs-id" / id_run), str(tmp / "runs-patch" / patch_run),
                    "--out", "report")
        assert "57.14" in table and "50.00" in table, table
        with open(tmp / "report" / "comparison.csv", newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 2 and rows[0]["run_id"], rows

        prompts = vsp("render", "--task", "id", "--strategy", "standard", "--dataset", sard, "--n", "2")
        assert prompts.count("--- user ---") == 2, prompts
        assert "have a CWE-787 vulnerability" in prompts

        vsp("run", "--task", "discover", "--strategy", "fewshot", "--dataset", sard, "--model", "mock-disc",
            "--out", "runs-disc")
        disc_run = run_id("runs-disc")
        picked = vsp("failures", "sample", "--run", disc_run, "--runs-root", "runs-disc", "--kind", "fp",
                     "--n", "3", "--seed", "1").split()
        assert len(picked) == 3, picked
        for sample, category in zip(picked, ["oblivion_of_cwe", "oblivion_of_cwe", "incomplete_data_flow"]):
            vsp("failures", "record", "--file", "failures.csv", "--run", disc_run, "--sample", sample,
                "--kind", "fp", "--category", category, "--annotator", "smoke")
        shares = vsp("failures", "summary", "--file", "failures.csv", "--kind", "fp")
        assert "oblivion_of_cwe  66.67%" in shares, shares

        campaign = vsp("campaign", "--snippets", str(data / "cve_small.csv"), "--model", "mock-disc",
                       "--strategy", "standard")
        assert "hit" in campaign, campaign

        vsp("run", "--task", "patch", "--strategy", "naivecot", "--dataset", sard, "--model", "mock-id",
            "--out", "runs-bad", expect=1)
        vsp("nonsense", expect=None)

    print("cli smoke ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
