#!/usr/bin/env python3
# Copyright 2026 The Newstrend Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Generates the bundled 200-document synthetic news fixture.

Output is deterministic: python3 tools/gen_fixture.py > tests/data/fixture_corpus.jsonl
"""

import json
import random
import sys

MONTHS = ["2018-06", "2018-10", "2018-11", "2018-12", "2019-01", "2019-02", "2019-03"]
DOCS_PER_MONTH = {"2018-06": 26, "2018-10": 29, "2018-11": 29, "2018-12": 29,
                  "2019-01": 29, "2019-02": 29, "2019-03": 29}

BASKETBALL = "/sports/basketball"
FOOTBALL = "/sports/football"
POLITICS = "/news/politics"

# (verb, lemma, object or None) per frame; subject "LeBron James".
LEBRON = {
    "2018-10": [("leave", "the Cleveland Cavaliers", 6), ("leave", "his old team", 2),
                ("score", "points", 6), ("lead", "the team", 4),
                ("make", "a layup", 1), ("make", "a pass", 1), ("make", "history", 1),
                ("miss", "games", 1)],
    "2018-11": [("score", "points", 7), ("leave", "the Cleveland Cavaliers", 5),
                ("lead", "the team", 4), ("make", "a statement", 2), ("make", "a pass", 1),
                ("miss", "games", 2)],
    "2018-12": [("score", "points", 6), ("miss", "games", 5), ("lead", "the team", 4),
                ("make", "a layup", 1), ("make", "history", 1), ("make", "a comeback", 1),
                ("leave", "the Cleveland Cavaliers", 3),
                ("suffer", "a groin strain injury", 2)],
    "2019-01": [("miss", "games", 7), ("miss", "practice", 2),
                ("suffer", "a groin strain injury", 6), ("suffer", "a setback", 1),
                ("make", "a layup", 1), ("make", "history", 1), ("make", "a statement", 1),
                ("make", "the playoffs", 1), ("make", "a pass", 1),
                ("leave", "the Cleveland Cavaliers", 3), ("leave", "the court", 1),
                ("lead", "the team", 2), ("lead", "a comeback", 1)],
    "2019-02": [("miss", "games", 6), ("score", "points", 4), ("lead", "the team", 3),
                ("make", "a pass", 2), ("make", "history", 1),
                ("leave", "the Cleveland Cavaliers", 2)],
    "2019-03": [("score", "points", 6), ("lead", "the team", 5), ("make", "a layup", 3),
                ("miss", "games", 2), ("leave", "the court", 1)],
}

# (verb, object, count) per frame; subject "Lakers".
LAKERS = {
    "2018-06": [("sign", "James", 2), ("want", "Davis", 0)],
    "2018-10": [("need", "James", 3), ("win", "game", 2), ("want", "Ariza", 1),
                ("beat", "the Clippers", 1), ("play", "the Warriors", 1)],
    "2018-11": [("want", "Davis", 1), ("need", "James", 3), ("lose", "game", 3),
                ("chase", "Ariza", 3), ("sign", "Rondo", 1)],
    "2018-12": [("pursue", "Davis", 2), ("rest", "James", 3), ("win", "game", 2),
                ("want", "Ariza", 4), ("beat", "the Clippers", 1), ("start", "Ball", 1)],
    "2019-01": [("pursue", "Davis", 6), ("want", "Davis", 4), ("protect", "James", 3),
                ("lose", "game", 2), ("chase", "Ariza", 2), ("explore", "a trade", 1),
                ("face", "the Pelicans", 1)],
    "2019-02": [("want", "Davis", 4), ("pursue", "Davis", 2), ("rest", "James", 2),
                ("win", "game", 2), ("explore", "a trade", 1), ("beat", "the Clippers", 1)],
    "2019-03": [("need", "James", 2), ("lose", "game", 3), ("play", "the Warriors", 1),
                ("consider", "a deal", 2)],
}

TRUMP = [("blamed", "blame", "the Democrats", 2), ("blamed", "blame", "the media", 1),
         ("liked", "like", "the summit", 1), ("liked", "like", "the deal", 1)]

FILLER = {
    BASKETBALL: [
        "the los angeles lakers beat the clippers behind lebron james",
        "lebron james and lonzo ball lead the los angeles lakers in points",
        "the lakers host the pelicans as anthony davis trade rumors grow",
        "brandon ingram and kyle kuzma score for the lakers in the fourth quarter",
        "the los angeles lakers lose to the boston celtics on the road",
        "anthony davis wants a trade from the pelicans before the deadline",
        "lebron james misses games with a groin strain injury",
        "the lakers coach praises lebron james after the game",
        "kevin durant and the warriors visit the los angeles lakers",
        "the clippers and the lakers share the arena in los angeles",
        "rumors say the lakers offer lonzo ball and brandon ingram for anthony davis",
        "the nba season continues as the lakers chase a playoff spot",
    ],
    POLITICS: [
        "president trump speaks at the white house about trade with china",
        "the white house says the economy adds jobs as unemployment falls",
        "congress debates tariffs and the trade deal with china",
        "trump meets kim jong un at the summit in singapore",
        "the democrats criticize the white house over the tariffs",
        "unemployment stays low while the fed raises interest rates",
        "the media covers the summit and the trade deal",
        "hilary clinton criticizes the tariffs in a speech",
        "the fed watches inflation and interest rates closely",
        "the president signs an order on trade at the white house",
    ],
    FOOTBALL: [
        "the philadelphia eagles beat the giants at home",
        "the eagles quarterback throws two touchdowns",
        "fans of the philadelphia eagles celebrate the win",
        "the eagles defense stops the cowboys late in the game",
    ],
}

PUNCT = {".", ",", ";", ":", "!", "?"}


def span(start, end):
    return {"start": start, "end": end}


def capitalize(words):
    return [w[:1].upper() + w[1:] if w not in PUNCT else w for w in words]


def frame_sentence(subject, verb, obj, lemma=None, modifiers=(), pronoun=False):
    """Builds '<subject> [mods] <verb> [object] .' with one frame.

    With pronoun=True the sentence reads '<subject> says he <verb> ...' and
    the frame subject is the pronoun, linked through a local cluster.
    """
    subj = subject.split()
    tokens = list(subj)
    clusters = []
    frame_subject = span(0, len(subj))
    if pronoun:
        tokens += ["says", "he"]
        frame_subject = span(len(subj) + 1, len(subj) + 2)
        clusters.append([span(0, len(subj)), frame_subject])
    mods = []
    for m in modifiers:
        mods.append(span(len(tokens), len(tokens) + 1))
        tokens.append(m)
    verb_span = span(len(tokens), len(tokens) + 1)
    tokens.append(verb)
    frame = {"subject": frame_subject, "verb": verb_span, "modifiers": mods,
             "negated": False, "verb_lemma": lemma or verb}
    if obj:
        words = obj.split()
        frame["object"] = span(len(tokens), len(tokens) + len(words))
        tokens += words
    else:
        frame["object"] = None
    tokens.append(".")
    return {"tokens": tokens, "frames": [frame], "clusters": clusters}


def filler_sentence(rng, topic):
    words = rng.choice(FILLER[topic]).split()
    return {"tokens": capitalize(words[:1]) + words[1:] + ["."], "frames": [], "clusters": []}


def expand(entries):
    out = []
    for entry in entries:
        *head, count = entry
        out += [tuple(head)] * count
    return out


def main():
    rng = random.Random(20190131)
    docs = []
    for month in MONTHS:
        # Frame-bearing sentences of the month, each tagged with a topic.
        items = []
        for i, (verb, obj) in enumerate(expand(LEBRON.get(month, []))):
            pronoun = month == "2019-01" and verb == "miss" and i % 3 == 0
            items.append((BASKETBALL, frame_sentence("LeBron James", verb, obj,
                                                     pronoun=pronoun)))
        for verb, obj in expand(LAKERS.get(month, [])):
            items.append((BASKETBALL, frame_sentence("Lakers", verb, obj)))
        if month == "2018-06":
            for verb, lemma, obj in expand(TRUMP):
                items.append((POLITICS, frame_sentence("Trump", verb, obj, lemma=lemma)))
            # A pronoun subject with a modal, resolved through its local cluster.
            s = frame_sentence("Trump", "resign", None, modifiers=("might",), pronoun=True)
            s["tokens"][1] = "insists"
            items.append((POLITICS, s))
        if month == "2018-11":
            items += eagles_hilary_clusters()
        # Pack items into documents without mixing topics in one document.
        n_docs = DOCS_PER_MONTH[month]
        capacity = 1
        while True:
            bodies, topics = [], []
            for topic, sentence in items:
                if not bodies or topics[-1] != topic or len(bodies[-1]) == capacity:
                    bodies.append([])
                    topics.append(topic)
                bodies[-1].append(sentence)
            if len(bodies) <= n_docs:
                break
            capacity += 1
        bodies += [[] for _ in range(n_docs - len(bodies))]
        topics += [None] * (n_docs - len(topics))
        for d in range(n_docs):
            if topics[d] is None:
                topics[d] = rng.choice([BASKETBALL, BASKETBALL, POLITICS, FOOTBALL])
            for _ in range(rng.randint(6, 10)):
                bodies[d].insert(rng.randint(0, len(bodies[d])),
                                 filler_sentence(rng, topics[d]))
            day = 1 + (d * 27) // n_docs
            docs.append({"doc_id": "%s-%03d" % (month, d),
                         "published_at": "%s-%02dT09:00:00Z" % (month, day),
                         "topic": topics[d], "sentences": bodies[d]})
    for doc in docs:
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")


def eagles_hilary_clusters():
    """Eagles and Hilary mentions whose local clusters chain across documents."""
    out = []
    s = frame_sentence("The Philadelphia Eagles", "beat", "the Giants")
    s["tokens"][-1:] = [",", "and", "the", "Eagles", "celebrate", "."]
    n = len(s["tokens"])
    s["clusters"].append([span(0, 3), span(n - 4, n - 2)])
    out.append((FOOTBALL, s))
    s = frame_sentence("The Eagles", "lose", "the rematch")
    s["tokens"][-1:] = [",", "but", "they", "recover", "."]
    n = len(s["tokens"])
    s["clusters"].append([span(0, 2), span(n - 3, n - 2)])
    out.append((FOOTBALL, s))
    s = frame_sentence("Hilary Clinton", "criticizes", "the tariffs", lemma="criticize")
    s["tokens"][-1:] = [",", "and", "Hilary", "says", "she", "will", "speak", "."]
    n = len(s["tokens"])
    s["clusters"].append([span(0, 2), span(n - 6, n - 5), span(n - 4, n - 3)])
    out.append((POLITICS, s))
    s = frame_sentence("Hilary", "visits", "Philadelphia", lemma="visit")
    s["tokens"][-1:] = [",", "where", "she", "speaks", "."]
    n = len(s["tokens"])
    s["clusters"].append([span(0, 1), span(n - 3, n - 2)])
    out.append((POLITICS, s))
    return out


if __name__ == "__main__":
    main()
