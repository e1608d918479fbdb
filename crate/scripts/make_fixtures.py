#!/usr/bin/env python3
"""Regenerates the synthetic test fixtures under crates/core/tests/fixtures.

Output is deterministic (fixed seeds); rerunning produces identical files.
"""

import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "crates" / "core" / "tests" / "fixtures"

WORKED_EXAMPLE = (
    "[S [NP [NNP Kavita] [NNP Sharma]] [VP [VBZ has] [VP [VBN booked] [NP [NP [DT the] [NN ticket]]] "
    "[PP [IN for] [NP [NP [DT the] [NN morning] [NN flight]]] [PP [TO to] [NP [NNP Delhi]]]]]] [. .]]"
)

NAMES = [
    ("Kavita", "Sharma"), ("Rahul", "Gupta"), ("Narendra", "Modi"), ("Priya", "Patel"),
    ("Amit", "Kumar"), ("Sunita", "Rao"), ("Vijay", "Singh"), ("Meera", "Nair"),
    ("Arjun", "Mehta"), ("Deepa", "Joshi"),
]
CITIES = ["Delhi", "Mumbai", "Pune", "Jaipur", "Agra", "Chennai", "Kolkata"]
NOUNS = ["ticket", "book", "letter", "house", "car", "train", "school", "market", "river", "garden"]
COMPOUNDS = [("morning", "flight"), ("banana", "shake"), ("train", "station"), ("bus", "stop"),
             ("tea", "cup"), ("school", "bus"), ("football", "match")]
ADJ = ["old", "new", "big", "small", "red", "quiet"]
LIGHT = [("booked", "VBD", "the", "ticket"), ("took", "VBD", "a", "walk"), ("made", "VBD", "a", "call"),
         ("gave", "VBD", "a", "speech"), ("had", "VBD", "a", "meal"), ("got", "VBD", "a", "job")]
VERBS = [("saw", "VBD"), ("visited", "VBD"), ("liked", "VBD"), ("bought", "VBD"), ("read", "VBD"),
         ("likes", "VBZ"), ("sees", "VBZ")]
PREPS = ["for", "with", "in", "near", "from"]


def leaf(tag, word):
    return (tag, word)


def node(tag, *kids):
    return (tag, list(kids))


def render(t, style):
    o, c = ("[", "]") if style == "square" else ("(", ")")
    tag, body = t
    if isinstance(body, str):
        esc = {"(": "-LRB-", ")": "-RRB-", "[": "-LSB-", "]": "-RSB-"}
        return f"{o}{tag} {esc.get(body, body)}{c}"
    return o + tag + " " + " ".join(render(k, style) for k in body) + c


def name_np(r):
    a, b = r.choice(NAMES)
    return node("NP", leaf("NNP", a), leaf("NNP", b))


def simple_np(r):
    k = r.randrange(6)
    if k == 0:
        return name_np(r)
    if k == 1:
        return node("NP", leaf("NNP", r.choice(CITIES)))
    if k == 2:
        a, b = r.choice(COMPOUNDS)
        return node("NP", leaf("DT", "the"), leaf("NN", a), leaf("NN", b))
    if k == 3:
        return node("NP", leaf("DT", "a"), leaf("JJ", r.choice(ADJ)), leaf("NN", r.choice(NOUNS)))
    if k == 4:
        return node("NP", leaf("PRP", r.choice(["he", "she", "it", "they"])))
    return node("NP", leaf("DT", "the"), leaf("NN", r.choice(NOUNS)))


def pp(r):
    if r.random() < 0.3:
        return node("PP", leaf("TO", "to"), node("NP", leaf("NNP", r.choice(CITIES))))
    return node("PP", leaf("IN", r.choice(PREPS)), simple_np(r))


def vp(r):
    k = r.randrange(7)
    if k == 0:
        v, tag, d, n = r.choice(LIGHT)
        return node("VP", leaf(tag, v), node("NP", leaf("DT", d), leaf("NN", n)))
    if k == 1:
        v, tag, d, n = r.choice(LIGHT)
        return node("VP", leaf("VBZ", "has"),
                    node("VP", leaf("VBN", v), node("NP", node("NP", leaf("DT", d), leaf("NN", n))), pp(r)))
    if k == 2:
        return node("VP", leaf("MD", "will"), node("VP", leaf("VB", "visit"), simple_np(r)))
    if k == 3:
        return node("VP", leaf("VBD", "gave"), simple_np(r), node("NP", leaf("DT", "a"), leaf("NN", r.choice(NOUNS))))
    if k == 4:
        return node("VP", leaf("VBD", "went"), pp(r))
    if k == 5:
        v, tag = r.choice(VERBS)
        obj = node("NP", node("NP", leaf("DT", "the"), leaf("NN", r.choice(NOUNS))), pp(r))
        return node("VP", leaf(tag, v), obj)
    v, tag = r.choice(VERBS)
    return node("VP", leaf(tag, v), simple_np(r), pp(r))


def sentence(r):
    kids = [simple_np(r), vp(r)]
    if r.random() < 0.1:
        kids.insert(1, node("PRN", leaf("-LRB-", "("), node("NP", leaf("NNP", r.choice(CITIES))), leaf("-RRB-", ")")))
    kids.append(leaf(".", "."))
    return node("S", *kids)


def trees():
    r = random.Random(20240611)
    seen, out = set(), []
    while len(out) < 99:
        t = sentence(r)
        s = render(t, "square")
        if s not in seen and s != WORKED_EXAMPLE:
            seen.add(s)
            out.append(t)
    return out


# Braille word list ---------------------------------------------------------

CONS = list("कखगघचछजझटठडढणतथदधनपफबभमयरलवशषसह")
VOWELS = list("अआइईउऊएऐओऔ")
MATRAS = ["", "", "ा", "ि", "ी", "ु", "ू", "े", "ै", "ो", "ौ", "ृ"]
REAL = """कविता शर्मा दिल्ली भारत हिंदी पानी किताब घर स्कूल बाज़ार नदी बगीचा सुबह शाम रात दिन
आदमी औरत बच्चा लड़की लड़का परिवार दोस्त शहर गाँव देश भाषा अक्षर शब्द वाक्य कहानी कविताएँ
मौसम बारिश धूप हवा आसमान धरती पहाड़ समुद्र जंगल पेड़ फूल फल सब्ज़ी रोटी चावल दाल दूध चाय
टिकट सफ़र यात्रा स्टेशन गाड़ी रेल हवाई जहाज़ उड़ान समय घंटा मिनट सप्ताह महीना साल आज कल
अच्छा बुरा बड़ा छोटा नया पुराना लाल हरा नीला पीला सफ़ेद काला सुंदर मज़बूत कमज़ोर तेज़ धीमा
पढ़ना लिखना बोलना सुनना देखना खाना पीना सोना जागना चलना दौड़ना खेलना गाना नाचना हँसना रोना
प्रधानमंत्री राष्ट्रपति सरकार संसद न्यायालय विद्यालय विश्वविद्यालय अध्यापक छात्र परीक्षा
ज्ञान विज्ञान गणित इतिहास भूगोल संगीत कला खेल स्वास्थ्य डॉक्टर अस्पताल दवा इलाज
क्षमा कृपया धन्यवाद नमस्ते स्वागत शुभकामना प्रेम दुःख सुख शांति युद्ध स्वतंत्रता
""".split()


def braille_ok(w):
    allowed = set(CONS) | set(VOWELS) | set(MATRAS) | set("्ंःँ") | {"ळ", "ङ", "ञ"}
    if any(ch not in allowed for ch in w if ch):
        return False
    if w.startswith("ण"):
        return False
    for a, b in zip(w, w[1:]):
        if a in CONS + ["ळ", "ङ", "ञ"] and b in VOWELS:
            return False
    return True


def words():
    r = random.Random(7)
    out, seen = [], set()
    for w in REAL:
        if braille_ok(w) and w not in seen:
            seen.add(w)
            out.append(w)
    while len(out) < 1000:
        parts = []
        if r.random() < 0.15:
            parts.append(r.choice(VOWELS))
        for _ in range(r.randint(1, 3)):
            c = r.choice(CONS)
            if r.random() < 0.15:
                c += "्" + r.choice(CONS)
            parts.append(c + r.choice(MATRAS))
        if r.random() < 0.15:
            parts.append(r.choice(["ं", "ः", "ँ"]))
        w = "".join(parts)
        if braille_ok(w) and w not in seen:
            seen.add(w)
            out.append(w)
    return out


# BLEU fixture --------------------------------------------------------------

def bleu_pairs(vocab):
    r = random.Random(99)
    hyps, refs = [], []
    for i in range(50):
        ref = [r.choice(vocab) for _ in range(r.randint(3, 14))]
        mode = i % 5
        if mode == 0:
            hyp = list(ref)
        elif mode == 1:
            hyp = [w if r.random() < 0.7 else r.choice(vocab) for w in ref]
        elif mode == 2:
            hyp = ref[: max(1, len(ref) - r.randint(1, 3))]
        elif mode == 3:
            hyp = ref + [r.choice(vocab) for _ in range(r.randint(1, 3))]
            r.shuffle(hyp)
        else:
            hyp = [r.choice(vocab) for _ in range(r.randint(2, 10))]
        hyps.append(" ".join(hyp))
        refs.append(" ".join(ref))
    return hyps, refs


def write(path, lines):
    path.write_text("".join(l + "\n" for l in lines), encoding="utf-8")


def main():
    ts = trees()
    treebank = ["(ROOT " + render(t, "round") + ")" for t in ts[:99]]
    treebank.insert(0, "(ROOT " + WORKED_EXAMPLE.replace("[", "(").replace("]", ")") + ")")
    write(FIX / "treebank_sample.txt", treebank)

    corpus = [WORKED_EXAMPLE] + [render(t, "square") for t in ts]
    write(FIX / "corpus_100.txt", corpus)
    broken = list(corpus)
    broken[36] = broken[36][:-1]
    write(FIX / "corpus_100_corrupt.txt", broken)

    wl = words()
    write(FIX / "devanagari_words_1000.txt", wl)

    r = random.Random(5)
    translations = []
    for i in range(100):
        ws = [r.choice(wl) for _ in range(r.randint(3, 8))]
        if i % 10 == 0:
            ws.append("".join(chr(0x966 + r.randrange(10)) for _ in range(r.randint(1, 4))))
        translations.append(" ".join(ws) + " ।")
    write(FIX / "translations_100.txt", translations)

    hyps, refs = bleu_pairs(wl[:60])
    write(FIX / "bleu_hyp_50.txt", hyps)
    write(FIX / "bleu_ref_50.txt", refs)


if __name__ == "__main__":
    main()
