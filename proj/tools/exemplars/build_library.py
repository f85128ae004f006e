#!/usr/bin/env python3
"""Writes the exemplar library under data/exemplars from the pairs below.

Layout: <family>/<task>/<cwe>/<pair>/{question.txt, vulnerable.c, patched.c,
answer_vulnerable.txt, answer_patched.txt}. Questions are rendered from
data/templates so they match what the harness asks of test samples.

    python3 tools/exemplars/build_library.py [--out data/exemplars] [--check]
"""

import argparse
import filecmp
import shutil
import sys
import tempfile
import textwrap
from dataclasses import dataclass
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
TEMPLATES = ROOT / "data" / "templates"

CWE_NAMES = {
    787: "out-of-bound write",
    125: "out-of-bound read",
    476: "NULL-pointer-dereference",
    416: "use-after-free",
    190: "integer overflow",
    20: "improper input validation",
    78: "OS command injection",
    269: "improper privilege management",
    369: "divide by zero",
    798: "use of hard-coded credentials",
}

CWE_MEANING = {
    787: "writing data past the end, or before the beginning, of a buffer",
    125: "reading data past the end, or before the beginning, of a buffer",
    476: "dereferencing a pointer that can be NULL",
    416: "using memory after it has been freed",
    190: "an arithmetic result that wraps around because it does not fit its type",
    20: "accepting input without checking that it has the properties the code relies on",
    78: "building an operating system command from input that can change the command",
    269: "granting or keeping privileges that the code does not need",
    369: "dividing by a value that can be zero",
    798: "embedding a password or key in the code itself",
}


@dataclass
class Pair:
    cwe: int
    vulnerable: str
    vul_line: str      # line of `vulnerable` that the patch replaces
    fix_line: str      # its replacement in the patched code
    statement: str     # the statement most likely to be vulnerable
    flaw: str          # why it is vulnerable (control and data flow)
    safe: str          # why the patched code is safe
    root_cause: str
    strategy: str

    @property
    def patched(self) -> str:
        lines = self.vulnerable.split("\n")
        hits = [i for i, l in enumerate(lines) if l.strip() == self.vul_line]
        assert len(hits) == 1, (self.cwe, self.vul_line)
        indent = lines[hits[0]][: len(lines[hits[0]]) - len(lines[hits[0]].lstrip())]
        lines[hits[0]] = indent + self.fix_line
        return "\n".join(lines)


def code(s: str) -> str:
    return textwrap.dedent(s).strip("\n")


PAIRS = [
    # ---- out-of-bound write
    Pair(787, code("""
        void copy_name(char *dst_out, const char *src, size_t len)
        {
            char buf[16];
            if (len > 16)
                return;
            for (size_t i = 0; i <= len; i++)
                buf[i] = src[i];
            memcpy(dst_out, buf, len);
        }"""),
         "for (size_t i = 0; i <= len; i++)", "for (size_t i = 0; i < len; i++)",
         "`buf[i] = src[i];`",
         "The write is controlled by the loop `for (size_t i = 0; i <= len; i++)`, and `len` may be 16 after the check `if (len > 16)`. When `len` is 16 the last iteration writes `buf[16]`, one byte past the 16-byte buffer.",
         "The loop now runs while `i < len`, and `len` is at most 16 after the check, so the largest index written is 15.",
         "the loop bound `i <= len` lets the index reach `len`, which equals the buffer size when `len` is 16",
         "make the loop stop before `len` so the index stays below the buffer size"),
    Pair(787, code("""
        int set_label(struct widget *w, const char *input)
        {
            char label[32];
            if (input == NULL)
                return -1;
            strcpy(label, input);
            return widget_apply(w, label);
        }"""),
         "strcpy(label, input);", "snprintf(label, sizeof(label), \"%s\", input);",
         "`strcpy(label, input);`",
         "`input` comes from the caller and its length is never compared with the 32-byte `label`. The only check before the copy is `input == NULL`, so a longer string is copied past the end of `label`.",
         "The copy is now `snprintf(label, sizeof(label), \"%s\", input);`, which writes at most `sizeof(label)` bytes including the terminator.",
         "`strcpy` copies the whole caller-controlled string into a 32-byte buffer without a length check",
         "replace the unbounded copy with a copy bounded by `sizeof(label)`"),
    Pair(787, code("""
        int table[10];

        int store(int idx, int value)
        {
            if (idx < 0 || idx > 10)
                return -1;
            table[idx] = value;
            return 0;
        }"""),
         "if (idx < 0 || idx > 10)", "if (idx < 0 || idx >= 10)",
         "`table[idx] = value;`",
         "`idx` is a parameter, and the guard `if (idx < 0 || idx > 10)` lets `idx == 10` through. The write then reaches `table[10]`, one element past the ten-element array.",
         "The guard now rejects `idx >= 10`, so the write only reaches `table[0]` through `table[9]`.",
         "the bounds check uses `> 10` and accepts the index 10",
         "reject every index that is not below the array length of 10"),
    Pair(787, code("""
        void read_header(struct packet *pkt)
        {
            unsigned char hdr[8];
            if (pkt->len == 0)
                return;
            memcpy(hdr, pkt->data, pkt->len);
            parse_header(hdr);
        }"""),
         "memcpy(hdr, pkt->data, pkt->len);", "memcpy(hdr, pkt->data, pkt->len < sizeof(hdr) ? pkt->len : sizeof(hdr));",
         "`memcpy(hdr, pkt->data, pkt->len);`",
         "The copy length `pkt->len` comes from the packet and is only checked against zero. Any length above 8 makes `memcpy` write past the end of `hdr`.",
         "The copy length is now capped at `sizeof(hdr)`, so `memcpy` never writes more than 8 bytes.",
         "the copy length is taken from the packet without comparing it with the size of `hdr`",
         "cap the copy length at `sizeof(hdr)`"),
    # ---- out-of-bound read
    Pair(125, code("""
        int get_item(const int *items, int count, int idx)
        {
            if (idx < 0)
                return 0;
            return items[idx];
        }"""),
         "if (idx < 0)", "if (idx < 0 || idx >= count)",
         "`return items[idx];`",
         "`idx` is checked only against 0 by `if (idx < 0)`. Nothing compares it with `count`, so `items[idx]` reads past the end of the array for `idx >= count`.",
         "The check now also rejects `idx >= count`, so the read stays inside the array.",
         "the index is never compared with the array length `count`",
         "reject indexes that are not below `count` before the read"),
    Pair(125, code("""
        long checksum(const unsigned char *data, size_t n)
        {
            long sum = 0;
            for (size_t i = 0; i <= n; i++)
                sum += data[i];
            return sum;
        }"""),
         "for (size_t i = 0; i <= n; i++)", "for (size_t i = 0; i < n; i++)",
         "`sum += data[i];`",
         "The read is controlled by the loop `for (size_t i = 0; i <= n; i++)`. On the last iteration `i` equals `n`, so `data[n]` is read one element past the `n` valid bytes.",
         "The loop now stops while `i < n`, so only `data[0]` through `data[n - 1]` are read.",
         "the loop condition `i <= n` reads the element at index `n`",
         "make the loop stop before `n`"),
    Pair(125, code("""
        int last_reading(const int *readings, size_t size)
        {
            if (size == 0)
                return -1;
            return readings[size];
        }"""),
         "return readings[size];", "return readings[size - 1];",
         "`return readings[size];`",
         "`size` is the number of readings, and the check `if (size == 0)` only guarantees at least one. The last valid index is `size - 1`, so `readings[size]` reads one element past the end.",
         "The code now returns `readings[size - 1]`, and `size` is at least 1 after the check, so the index is valid.",
         "the last element is read with the index `size` instead of `size - 1`",
         "read the element at `size - 1`"),
    Pair(125, code("""
        int has_magic(const char *buf, size_t buf_len)
        {
            if (buf_len < 4)
                return 0;
            return memcmp(buf, "MAGIC", 5) == 0;
        }"""),
         "if (buf_len < 4)", "if (buf_len < 5)",
         "`memcmp(buf, \"MAGIC\", 5)`",
         "`memcmp` reads 5 bytes from `buf`, but the guard `if (buf_len < 4)` lets a 4-byte buffer through. In that case the fifth byte is read past the end of `buf`.",
         "The guard now requires `buf_len >= 5`, which matches the 5 bytes `memcmp` reads.",
         "the length check allows 4-byte buffers while 5 bytes are compared",
         "require at least 5 bytes before the comparison"),
    # ---- NULL-pointer-dereference
    Pair(476, code("""
        int lookup_value(struct list *list, const char *key)
        {
            struct item *it = find(list, key);
            return it->value;
        }"""),
         "return it->value;", "return it ? it->value : -1;",
         "`return it->value;`",
         "`it` comes from `find`, which returns NULL when `key` is not in the list. There is no check between the call and the dereference `it->value`.",
         "The code now dereferences `it` only when it is not NULL and returns -1 otherwise.",
         "the result of `find` can be NULL and is dereferenced without a check",
         "check `it` before reading `it->value`"),
    Pair(476, code("""
        int flush(struct context *ctx)
        {
            if (ctx->buf == NULL)
                return 0;
            write_all(ctx->fd, ctx->buf, ctx->used);
            ctx->used = 0;
            return 1;
        }"""),
         "if (ctx->buf == NULL)", "if (ctx == NULL || ctx->buf == NULL)",
         "`ctx->buf`",
         "`ctx` is a parameter that callers pass as NULL when no context exists. The first statement already reads `ctx->buf` without checking `ctx` itself.",
         "The check now tests `ctx == NULL` before `ctx->buf`, and `||` stops evaluation when `ctx` is NULL.",
         "`ctx` is dereferenced in the first condition without being checked",
         "test `ctx` for NULL before any member access"),
    Pair(476, code("""
        size_t home_length(void)
        {
            const char *home = getenv("HOME");
            size_t n = strlen(home);
            return n;
        }"""),
         "size_t n = strlen(home);", "size_t n = home ? strlen(home) : 0;",
         "`strlen(home)`",
         "`home` is the return value of `getenv`, which is NULL when the variable is unset. It flows directly into `strlen`, which dereferences it.",
         "`strlen` is now called only when `home` is not NULL.",
         "the NULL result of `getenv` reaches `strlen`",
         "call `strlen` only for a non-NULL `home`"),
    Pair(476, code("""
        void reset_device(struct device *dev)
        {
            if (dev->ops->reset)
                dev->ops->reset(dev);
            dev->state = DEV_IDLE;
        }"""),
         "if (dev->ops->reset)", "if (dev->ops && dev->ops->reset)",
         "`dev->ops->reset`",
         "`dev->ops` is NULL for devices without driver callbacks. The condition reads `dev->ops->reset` without testing `dev->ops` first.",
         "The condition now tests `dev->ops` before reading `dev->ops->reset`.",
         "`dev->ops` can be NULL and is dereferenced in the condition",
         "test `dev->ops` before reading its members"),
    # ---- use-after-free
    Pair(416, code("""
        void drop_data(struct holder *h)
        {
            free(h->data);
            if (h->data)
                memset(h->data, 0, h->size);
        }"""),
         "free(h->data);", "free(h->data); h->data = NULL;",
         "`memset(h->data, 0, h->size);`",
         "`h->data` is freed by `free(h->data);` and keeps its old value. The check `if (h->data)` is then true, so `memset` writes to freed memory.",
         "`h->data` is set to NULL right after `free`, so the check fails and the freed memory is not touched.",
         "the pointer still holds the freed address when it is checked and used",
         "set `h->data` to NULL immediately after freeing it"),
    Pair(416, code("""
        void free_list(struct node *head)
        {
            struct node *p, *q;
            for (p = head; p; p = p->next) free(p);
        }"""),
         "for (p = head; p; p = p->next) free(p);", "for (p = head; p; p = q) { q = p->next; free(p); }",
         "`p = p->next`",
         "The loop body frees `p`, and then the loop step `p = p->next` reads the `next` field of the node that was just freed.",
         "The successor is saved in `q` before `p` is freed, and the loop advances with `p = q`.",
         "the loop step reads `p->next` after the body freed `p`",
         "save `p->next` before freeing `p` and advance with the saved pointer"),
    Pair(416, code("""
        int grow(char *buf, size_t size)
        {
            char *n = realloc(buf, size);
            if (n == NULL)
                return -1;
            buf[0] = 'x';
            return consume(n);
        }"""),
         "buf[0] = 'x';", "n[0] = 'x';",
         "`buf[0] = 'x';`",
         "When `realloc` succeeds it may move the block and free the old one. After the check `if (n == NULL)`, the code still writes through the old pointer `buf`.",
         "The write now goes through `n`, the pointer returned by `realloc`.",
         "the old pointer `buf` is used after `realloc` may have freed it",
         "write through the pointer returned by `realloc`"),
    Pair(416, code("""
        void rename_session(struct session *s, const char *new_name)
        {
            char *alias = s->name;
            free(s->name);
            s->name = strdup(new_name);
            printf("renamed %s\\n", alias);
        }"""),
         "printf(\"renamed %s\\n\", alias);", "printf(\"renamed to %s\\n\", s->name);",
         "`printf(\"renamed %s\\n\", alias);`",
         "`alias` points to the same block as `s->name`. That block is freed by `free(s->name);` and `alias` is then read by `printf`.",
         "The message now prints `s->name`, which points to the new copy from `strdup`.",
         "`alias` still points to the freed name when it is printed",
         "print the new name instead of the stale alias"),
    # ---- integer overflow
    Pair(190, code("""
        void *alloc_array(int count, int size)
        {
            if (count <= 0 || size <= 0)
                return NULL;
            int total = count * size;
            return malloc(total);
        }"""),
         "if (count <= 0 || size <= 0)", "if (count <= 0 || size <= 0 || count > INT_MAX / size)",
         "`int total = count * size;`",
         "`count` and `size` are positive but otherwise unbounded. Their product can exceed `INT_MAX`, and the wrapped `total` makes `malloc` return a buffer smaller than the caller expects.",
         "The check now rejects `count > INT_MAX / size`, so `count * size` always fits in an `int`.",
         "`count * size` is computed in `int` without checking that it fits",
         "reject inputs where `count` exceeds `INT_MAX / size`"),
    Pair(190, code("""
        int join(const char *a, unsigned short la, const char *b, unsigned short lb)
        {
            unsigned short len = la + lb;
            char *out = malloc(len);
            if (!out)
                return -1;
            memcpy(out, a, la);
            memcpy(out + la, b, lb);
            return emit(out, len);
        }"""),
         "unsigned short len = la + lb;", "size_t len = (size_t)la + lb;",
         "`unsigned short len = la + lb;`",
         "`la` and `lb` can each be up to 65535. Their sum is stored in an `unsigned short`, so it wraps for large inputs and `malloc(len)` gets a size smaller than the two copies that follow.",
         "The sum is now computed and stored as `size_t`, which holds any sum of two `unsigned short` values.",
         "the sum of two lengths is truncated to `unsigned short`",
         "compute and store the length in `size_t`"),
    Pair(190, code("""
        int read_range(struct file *f, size_t off, size_t len, char *dst)
        {
            if (off + len > f->size)
                return -1;
            memcpy(dst, f->data + off, len);
            return 0;
        }"""),
         "if (off + len > f->size)", "if (len > f->size || off > f->size - len)",
         "`if (off + len > f->size)`",
         "`off` and `len` come from the caller. `off + len` can wrap around to a small value, which passes the check while `memcpy` reads far beyond `f->data`.",
         "The check now compares `len` with `f->size` and `off` with `f->size - len`, so no sum is computed.",
         "the bounds check adds two caller values and the sum can wrap",
         "rewrite the check so it never adds `off` and `len`"),
    Pair(190, code("""
        int midpoint(int lo, int hi)
        {
            if (lo > hi)
                return -1;
            int avg = (lo + hi) / 2;
            return avg;
        }"""),
         "int avg = (lo + hi) / 2;", "int avg = lo + (hi - lo) / 2;",
         "`int avg = (lo + hi) / 2;`",
         "`lo` and `hi` are only ordered by the check `if (lo > hi)`. For large values `lo + hi` exceeds `INT_MAX` and wraps to a negative number.",
         "The midpoint is now `lo + (hi - lo) / 2`, and `hi - lo` fits because `lo <= hi`.",
         "`lo + hi` can exceed `INT_MAX`",
         "compute the midpoint from the difference `hi - lo`"),
    # ---- substitute types for other-type exemplars
    Pair(20, code("""
        int open_profile(const char *name)
        {
            char path[256];
            if (name[0] != '\\0')
                snprintf(path, sizeof(path), "/var/profiles/%s", name);
            else
                return -1;
            return open(path, O_RDONLY);
        }"""),
         "if (name[0] != '\\0')", "if (name[0] != '\\0' && strchr(name, '/') == NULL)",
         "`snprintf(path, sizeof(path), \"/var/profiles/%s\", name);`",
         "`name` comes from the user and is only checked for being non-empty. A name such as `../etc/passwd` leaves the profile directory.",
         "The check now also rejects names that contain `/`, so the path stays inside the profile directory.",
         "the profile name is not checked for path separators",
         "reject names that contain `/`"),
    Pair(78, code("""
        int list_dir(const char *dir)
        {
            char cmd[512];
            snprintf(cmd, sizeof(cmd), "ls %s", dir);
            return system(cmd);
        }"""),
         "return system(cmd);", "return execlp(\"ls\", \"ls\", \"--\", dir, (char *)NULL);",
         "`return system(cmd);`",
         "`dir` comes from the caller and is pasted into `cmd`. `system` passes the string to the shell, so `dir` can add commands such as `; rm -rf ~`.",
         "The command now runs through `execlp` with `dir` as a separate argument, so no shell interprets it.",
         "user input is pasted into a shell command line",
         "run the program directly with the directory as an argument"),
    Pair(269, code("""
        int run_user_script(const char *script)
        {
            if (setuid(0) != 0)
                return -1;
            return execl(script, script, (char *)NULL);
        }"""),
         "if (setuid(0) != 0)", "if (setuid(getuid()) != 0)",
         "`setuid(0)`",
         "The function runs a script chosen by the user. Before that it switches to user id 0, so the script runs as root.",
         "The code now switches to `getuid()`, the invoking user, before running the script.",
         "the process takes root privileges before running a user-chosen script",
         "drop to the invoking user's id instead of root"),
    Pair(369, code("""
        int average(const int *values, int count)
        {
            int total = 0;
            for (int i = 0; i < count; i++)
                total += values[i];
            return total / count;
        }"""),
         "return total / count;", "return count ? total / count : 0;",
         "`return total / count;`",
         "`count` is a parameter that callers pass as 0 for empty input. The loop then does nothing and `total / count` divides by zero.",
         "The division now happens only when `count` is not zero.",
         "`count` can be zero when it is used as a divisor",
         "return 0 when `count` is zero"),
    Pair(798, code("""
        int login(const char *user, const char *pass)
        {
            if (strcmp(pass, "admin123") == 0)
                return grant(user);
            return 0;
        }"""),
         "if (strcmp(pass, \"admin123\") == 0)", "if (check_password(user, pass))",
         "`strcmp(pass, \"admin123\")`",
         "The password `admin123` is written into the code, and any user who supplies it is granted access.",
         "The password is now checked by `check_password`, which looks it up for the given user.",
         "the password is a constant in the code",
         "check the password against the stored credentials of the user"),
]

IRRELEVANT = (
    "The code builds no SQL queries, so SQL injection does not apply. "
    "It prints no user-controlled format strings, so format string issues do not apply. "
    "It starts no threads, so race conditions do not apply."
)


def template(name: str) -> str:
    return (TEMPLATES / f"{name}.txt").read_text().rstrip("\n")


def fill(text: str, values: dict) -> str:
    out, i = [], 0
    while i < len(text):
        if text[i] == "{":
            end = text.find("}", i)
            key = text[i + 1:end]
            if end != -1 and key in values:
                out.append(values[key])
                i = end + 1
                continue
        out.append(text[i])
        i += 1
    return "".join(out)


def question(task: str, p: Pair) -> str:
    if task == "identification":
        return fill(template("identification_question"), {"cwe": f"CWE-{p.cwe}"})
    if task == "discovery":
        return template("discovery_question")
    return fill(template("patching_question"), {
        "code": p.vulnerable.replace("```", "\\`\\`\\`"),
        "number": str(p.cwe),
        "name": CWE_NAMES[p.cwe],
        "line": p.vul_line,
    })


def meaning(p: Pair) -> str:
    return f"CWE-{p.cwe} ({CWE_NAMES[p.cwe]}) means {CWE_MEANING[p.cwe]}."


def patch_block(p: Pair) -> str:
    return f"```diff\n- {p.vul_line}\n+ {p.fix_line}\n```"


def answers(family: str, task: str, p: Pair) -> dict:
    n = p.cwe
    if family in ("VSP", "IrrelevantVSP"):
        extra = (" " + IRRELEVANT) if family == "IrrelevantVSP" else ""
        if task == "identification":
            vul = (f"{meaning(p)} The statement most likely to have this vulnerability is {p.statement}. "
                   f"{p.flaw}{extra} Therefore, the code has a CWE-{n} vulnerability.")
            pat = (f"{meaning(p)} The statement most likely to have this vulnerability is {p.statement}. "
                   f"{p.safe}{extra} Therefore, the code does not have a CWE-{n} vulnerability.")
            return {"vulnerable": vul, "patched": pat}
        if task == "discovery":
            vul = (f"The part most likely to be vulnerable is {p.statement}. {p.flaw}{extra} "
                   f"Therefore, the code is vulnerable. It has a CWE-{n} vulnerability.")
            pat = (f"The part most likely to be vulnerable is {p.statement}. {p.safe}{extra} "
                   f"Therefore, the code is not vulnerable.")
            return {"vulnerable": vul, "patched": pat}
        vul = (f"Step 1. Root cause analysis: the vulnerable line is `{p.vul_line}`, and {p.root_cause}.{extra} "
               f"Step 2. Patching strategy: {p.strategy}. The patch is:\n{patch_block(p)}")
        return {"vulnerable": vul}
    if family == "StandardFewShot":
        if task == "identification":
            return {"vulnerable": f"Yes, the code has a CWE-{n} vulnerability.",
                    "patched": f"No, the code does not have a CWE-{n} vulnerability."}
        if task == "discovery":
            return {"vulnerable": f"Yes, the code has a CWE-{n} vulnerability.",
                    "patched": "No, the code is not vulnerable."}
        return {"vulnerable": patch_block(p)}
    # NaiveCoT: step-by-step wording without the vulnerability semantics.
    if task == "identification":
        return {"vulnerable": f"Let's think step by step. {p.flaw} So the code has a CWE-{n} vulnerability.",
                "patched": f"Let's think step by step. {p.safe} So the code does not have a CWE-{n} vulnerability."}
    return {"vulnerable": f"Let's think step by step. {p.flaw} So the code is vulnerable. It has a CWE-{n} vulnerability.",
            "patched": f"Let's think step by step. {p.safe} So the code is not vulnerable."}


LAYOUT = {
    "VSP": ["identification", "discovery", "patching"],
    "StandardFewShot": ["identification", "discovery", "patching"],
    "NaiveCoT": ["identification", "discovery"],
    "IrrelevantVSP": ["identification", "discovery", "patching"],
}


def build(out: Path) -> None:
    per_cwe = {}
    for p in PAIRS:
        per_cwe.setdefault(p.cwe, []).append(p)
    for family, tasks in LAYOUT.items():
        for task in tasks:
            for cwe, pairs in per_cwe.items():
                substitute = len(pairs) == 1
                # Substitute types exist only for the families other-type prompting uses.
                if substitute and family not in ("VSP", "IrrelevantVSP"):
                    continue
                for k, p in enumerate(pairs, 1):
                    d = out / family / task / str(cwe) / f"pair{k:02d}"
                    d.mkdir(parents=True)
                    (d / "question.txt").write_text(question(task, p) + "\n")
                    (d / "vulnerable.c").write_text(p.vulnerable + "\n")
                    (d / "patched.c").write_text(p.patched + "\n")
                    for polarity, text in answers(family, task, p).items():
                        (d / f"answer_{polarity}.txt").write_text(text + "\n")


def same_tree(a: Path, b: Path) -> bool:
    cmp = filecmp.dircmp(a, b)
    if cmp.left_only or cmp.right_only or cmp.funny_files:
        return False
    _, mismatch, errors = filecmp.cmpfiles(a, b, cmp.common_files, shallow=False)
    if mismatch or errors:
        return False
    return all(same_tree(a / s, b / s) for s in cmp.common_dirs)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=ROOT / "data" / "exemplars")
    ap.add_argument("--check", action="store_true", help="fail if --out differs from a fresh build")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        fresh = Path(tmp) / "exemplars"
        build(fresh)
        if args.check:
            if not args.out.is_dir() or not same_tree(fresh, args.out):
                print(f"{args.out} is out of date; rerun {Path(__file__).name}", file=sys.stderr)
                return 1
            return 0
        if args.out.exists():
            shutil.rmtree(args.out)
        shutil.copytree(fresh, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
