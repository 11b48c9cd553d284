#!/usr/bin/env python3
# Copyright 2026 The kged Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the bundled fixtures under data/.

Everything is seeded, so rerunning produces identical files. Mock scripts and
trace fixtures that need the built binary are produced by record_fixtures.sh.
"""

import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
FETCHED_AT = "2026-01-01T00:00:00Z"


def write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def jsonl(records):
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)


# ---------------------------------------------------------------------------
# Snapshots

YAGO_CLASSES = [
    ("Person", "Thing"), ("Organization", "Thing"), ("Place", "Thing"),
    ("Product", "Thing"), ("FictionalEntity", "Thing"), ("Event", "Thing"),
    ("CreativeWork", "Thing"),
    ("Artist", "Person"), ("Musician", "Artist"), ("Singer", "Musician"),
    ("Guitarist", "Musician"), ("Actor", "Artist"), ("Writer", "Person"),
    ("SingerSongwriter", "Singer"), ("SingerSongwriter", "Writer"),
    ("Politician", "Person"), ("HeadOfGovernment", "Politician"),
    ("PrimeMinister", "HeadOfGovernment"), ("Senator", "Politician"),
    ("Athlete", "Person"), ("BasketballPlayer", "Athlete"),
    ("FootballPlayer", "Athlete"), ("BaseballPlayer", "Athlete"),
    ("TennisPlayer", "Athlete"), ("Golfer", "Athlete"),
    ("Scientist", "Person"), ("Physicist", "Scientist"), ("Chemist", "Scientist"),
    ("Saint", "Person"), ("Businessperson", "Person"),
    ("SportsTeam", "Organization"), ("BasketballTeam", "SportsTeam"),
    ("FootballClub", "SportsTeam"), ("BaseballTeam", "SportsTeam"),
    ("Company", "Organization"), ("TechCompany", "Company"),
    ("RecordLabel", "Company"), ("MusicGroup", "Organization"),
    ("PoliticalParty", "Organization"), ("EducationalInstitution", "Organization"),
    ("University", "EducationalInstitution"), ("Broadcaster", "Organization"),
    ("TVChannel", "Broadcaster"),
    ("PopulatedPlace", "Place"), ("City", "PopulatedPlace"), ("Town", "PopulatedPlace"),
    ("Country", "Place"), ("AdministrativeRegion", "Place"), ("State", "AdministrativeRegion"),
    ("Province", "AdministrativeRegion"), ("Landmark", "Place"), ("Building", "Landmark"),
    ("Stadium", "Building"), ("University", "Place"), ("BodyOfWater", "Place"),
    ("River", "BodyOfWater"), ("Lake", "BodyOfWater"),
    ("Vehicle", "Product"), ("Spacecraft", "Vehicle"), ("Car", "Vehicle"),
    ("Software", "Product"), ("VideoGame", "Software"),
    ("FictionalCharacter", "FictionalEntity"), ("ComicCharacter", "FictionalCharacter"),
    ("MythologicalCreature", "FictionalEntity"),
    ("SportsEvent", "Event"), ("TennisTournament", "SportsEvent"),
    ("GolfTournament", "SportsEvent"), ("Festival", "Event"),
    ("MusicFestival", "Festival"), ("Election", "Event"),
    ("MusicalWork", "CreativeWork"), ("Album", "MusicalWork"), ("Song", "MusicalWork"),
    ("Film", "CreativeWork"), ("TVProgram", "CreativeWork"), ("Book", "CreativeWork"),
]

# (entity, [classes]); surface forms drive the ambiguous mentions.
NAMED_ENTITIES = [
    ("JustinBieber", ["Singer"]),
    ("JustinTimberlake", ["Singer", "Actor"]),
    ("JustinTrudeau", ["PrimeMinister"]),
    ("Justin_Verlander", ["BaseballPlayer"]),
    ("Justin_Martyr", ["Saint"]),
    ("Phoenix_Arizona", ["City"]),
    ("Phoenix_Suns", ["BasketballTeam"]),
    ("Phoenix_Mercury", ["BasketballTeam"]),
    ("Phoenix_Mars_Lander", ["Spacecraft"]),
    ("Phoenix_Marvel_Comics", ["ComicCharacter"]),
    ("Phoenix_mythology", ["MythologicalCreature"]),
    ("Phoenix_band", ["MusicGroup"]),
    ("Barcelona", ["City", "FootballClub"]),
    ("Barcelona_Province", ["Province"]),
    ("Paris", ["City"]),
    ("Paris_Hilton", ["Actor", "Businessperson"]),
    ("Paris_Texas_film", ["Film"]),
    ("Paris_Saint_Germain", ["FootballClub"]),
    ("Michael_Jordan", ["BasketballPlayer"]),
    ("Michael_B_Jordan", ["Actor"]),
    ("Jordan_country", ["Country"]),
    ("Jordan_River", ["River"]),
    ("US_Open_tennis", ["TennisTournament"]),
    ("US_Open_golf", ["GolfTournament"]),
    ("Tiger_Woods", ["Golfer"]),
    ("Fox_Sports", ["TVChannel"]),
    ("Fox_Sports_program", ["TVProgram"]),
    ("Isle_of_Wight_Festival", ["MusicFestival"]),
    ("Isle_of_Wight_Festival_1970", ["MusicFestival"]),
    ("Aristotle_Onassis", ["Businessperson"]),
    ("Jacqueline_Kennedy_Onassis", ["Writer"]),
    ("Ronald_Reagan", ["Actor", "Politician"]),
    ("Governor", ["HeadOfGovernment"]),
    ("Governor_of_California", ["Governor"]),
    ("Georgia_country", ["Country"]),
    ("Georgia_US_state", ["State"]),
    ("Apple_Inc", ["TechCompany"]),
    ("Apple_Records", ["RecordLabel"]),
    ("Madonna", ["Singer", "Actor"]),
    ("Madonna_art", ["CreativeWork"]),
    ("Mercury_planet", ["Thing"]),
    ("Freddie_Mercury", ["Singer"]),
]
ENTITY_AS_CLASS = ["Governor"]


def generated_classes(rng, base, count, prefix):
    """Adds `count` generated classes below existing ones, parents drawn from
    classes created earlier so the result stays acyclic."""
    known = []
    for child, parent in base:
        for label in (child, parent):
            if label != "Thing" and label not in known:
                known.append(label)
    edges = list(base)
    for i in range(count):
        name = f"{prefix}{i:03d}"
        parent = rng.choice(known)
        edges.append((name, parent))
        if rng.random() < 0.15:
            second = rng.choice(known)
            if second != parent:
                edges.append((name, second))
        known.append(name)
    return edges, known


def leafish(edges, known):
    parents = {p for _, p in edges}
    return [c for c in known if c not in parents] or known


def build_snapshot(header, edges, typings, ec):
    lines = [f"# {header}"]
    lines += [f"EC\t{e}" for e in ec]
    lines += [f"SC\t{c}\t{p}" for c, p in edges]
    lines += [f"TY\t{e}\t{c}" for e, cs in typings for c in cs]
    return "\n".join(lines) + "\n"


def yago_sample():
    rng = random.Random(20240601)
    edges, known = generated_classes(rng, YAGO_CLASSES, 128, "YagoClass")
    leaves = leafish(edges, known)
    typings = list(NAMED_ENTITIES)
    for i in range(500 - len(typings)):
        pool = leaves if rng.random() < 0.7 else known
        classes = sorted({rng.choice(pool) for _ in range(1 if rng.random() < 0.8 else 2)})
        typings.append((f"YagoEntity{i:03d}", classes))
    return edges, typings


DBPEDIA_CHAIN = [
    ("Species", "Thing"), ("Eukaryote", "Species"), ("Person", "Eukaryote"),
    ("Artist", "Person"), ("Musician", "Artist"),
]
DBPEDIA_CLASSES = DBPEDIA_CHAIN + [
    ("Agent", "Thing"), ("Organisation", "Agent"), ("SportsTeam", "Organisation"),
    ("BasketballTeam", "SportsTeam"), ("SoccerClub", "SportsTeam"),
    ("Company", "Organisation"), ("Place", "Thing"), ("PopulatedPlace", "Place"),
    ("Settlement", "PopulatedPlace"), ("City", "Settlement"), ("Country", "PopulatedPlace"),
    ("Work", "Thing"), ("Film", "Work"), ("MusicalWork", "Work"), ("Album", "MusicalWork"),
    ("Athlete", "Person"), ("BasketballPlayer", "Athlete"), ("Politician", "Person"),
    ("Actor", "Artist"), ("Event", "Thing"), ("SportsEvent", "Event"),
]


def dbpedia_sample():
    rng = random.Random(20240602)
    edges, known = generated_classes(rng, DBPEDIA_CLASSES, 40, "DbpClass")
    leaves = leafish(edges, known)
    typings = [
        ("Musician_X", ["Musician"]),
        ("JustinBieber", ["Musician"]),
        ("JustinTrudeau", ["Politician"]),
        ("Phoenix_Arizona", ["City"]),
        ("Phoenix_Suns", ["BasketballTeam"]),
        ("Barcelona", ["City"]),
        ("FC_Barcelona", ["SoccerClub"]),
    ]
    for i in range(300):
        pool = leaves if rng.random() < 0.8 else known
        typings.append((f"DbpEntity{i:03d}", [rng.choice(pool)]))
    return edges, typings


def snapshots():
    write(DATA / "kg" / "minimal.tsv",
          "# minimal snapshot\nSC\tPerson\tThing\nSC\tMusician\tPerson\nTY\tJustinBieber\tMusician\n")
    write(DATA / "kg" / "fig1.tsv", "\n".join([
        "# two-step example: class query, then entity query",
        "SC\tPerson\tThing", "SC\tPolitician\tPerson", "SC\tMusician\tPerson",
        "TY\tJustinTrudeau\tPolitician", "TY\tJustinBieber\tMusician",
        "TY\tJustinTimberlake\tMusician", ""]))
    chain = ["# single candidate below a five-class chain"]
    chain += [f"SC\t{c}\t{p}" for c, p in DBPEDIA_CHAIN]
    chain += ["TY\tMusician_X\tMusician", ""]
    write(DATA / "kg" / "fig2_chain.tsv", "\n".join(chain))
    write(DATA / "reference" / "fig2_edges.tsv",
          "Musician\tMusician_X\tentity\nThing\tMusician\tclass\n")

    edges, typings = yago_sample()
    write(DATA / "kg" / "yago_sample.tsv",
          build_snapshot("YAGO-style sample snapshot (synthetic, seeded)", edges, typings,
                         ENTITY_AS_CLASS))
    edges, typings = dbpedia_sample()
    write(DATA / "kg" / "dbpedia_sample.tsv",
          build_snapshot("DBpedia-style sample snapshot (synthetic, seeded)", edges, typings, []))


# ---------------------------------------------------------------------------
# Datasets

def surface(entity):
    head = entity.split("_")[0]
    if head.startswith("Justin"):
        return "Justin"
    return head


def make_doc(doc_id, sentences):
    """sentences: list of (text, [(surface, mention)]). Returns doc record and
    mention records with byte offsets into the joined text."""
    text = ""
    mentions = []
    for sentence, marks in sentences:
        if text:
            text += " "
        base = len(text.encode("utf-8"))
        cursor = 0
        for surf, mention in marks:
            at = sentence.index(surf, cursor)
            start = base + len(sentence[:at].encode("utf-8"))
            end = start + len(surf.encode("utf-8"))
            cursor = at + len(surf)
            mention.update({"doc_id": doc_id, "surface": surf, "start": start, "end": end})
            mentions.append(mention)
        text += sentence
    return {"type": "doc", "doc_id": doc_id, "text": text}, mentions


def mini_dataset(typings):
    """≥ 50 mentions over the YAGO-style sample. A few golds are missing from
    their candidate set, a few are not in the KG at all, and some candidate
    sets contain entities the KG does not know."""
    rng = random.Random(7)
    entities = [e for e, _ in typings]
    groups = {}
    for e in entities:
        groups.setdefault(surface(e), []).append(e)
    ambiguous = [g for g in groups.values() if len(g) > 1]
    docs, mentions = [], []
    n = 0
    for d in range(20):
        sentences = []
        for _ in range(3):
            n += 1
            mid = f"mini-{n:03d}"
            roll = n % 12
            if roll == 5:  # gold outside the KG
                gold = f"Unlinked_Entity_{n}"
                cands = rng.sample(entities, 6) + [f"Wiki_Only_{n}"]
                surf = f"Unlinked {n}"
            else:
                group = ambiguous[n % len(ambiguous)] if n % 2 == 0 else None
                gold = rng.choice(group) if group else rng.choice(entities)
                pool = [e for e in (group or []) if e != gold]
                fill = [e for e in rng.sample(entities, 12) if e != gold and e not in pool]
                cands = [gold] + pool + fill
                cands = cands[: rng.randint(2, 10)]
                if roll == 3:  # gold in KG but not a candidate
                    cands = cands[1:] or [rng.choice(entities)]
                if roll == 8:
                    cands = cands[:9] + [f"Wiki_Only_{n}"]
                rng.shuffle(cands)
                surf = surface(gold).replace("YagoEntity", "Entity ")
            mention = {"type": "mention", "mention_id": mid, "gold": gold, "candidates": cands}
            sentences.append((f"The report mentioned {surf} in passing.", [(surf, mention)]))
        doc, ms = make_doc(f"mini-doc-{d:02d}", sentences)
        docs.append(doc)
        mentions.extend(ms)
    return docs, mentions


KORE_SENTENCES = [
    ("Justin sang for hours at the MTV awards.", "Justin", "JustinBieber",
     ["JustinTrudeau", "JustinBieber", "JustinTimberlake", "Justin_Verlander"]),
    ("Justin met the premier of Ontario in Ottawa.", "Justin", "JustinTrudeau",
     ["JustinTrudeau", "JustinBieber", "JustinTimberlake", "Justin_Martyr"]),
    ("Tiger lost the US Open after a bogey on the last hole.", "US Open", "US_Open_golf",
     ["US_Open_tennis", "US_Open_golf"]),
    ("A six-game series begins this Friday in Phoenix and the team hopes to get O'Neal back.",
     "Phoenix", "Phoenix_Arizona",
     ["Phoenix_Suns", "Phoenix_Arizona", "Phoenix_Mars_Lander", "Phoenix_Marvel_Comics"]),
    ("Onassis married Kennedy on October 20, 1968.", "Onassis", "Aristotle_Onassis",
     ["Aristotle_Onassis", "Jacqueline_Kennedy_Onassis"]),
    ("The Isle of Wight festival in 1970 was the biggest at its time.",
     "Isle of Wight festival", "Isle_of_Wight_Festival_1970",
     ["Isle_of_Wight_Festival", "Isle_of_Wight_Festival_1970"]),
    ("Jordan scored forty points against the Knicks.", "Jordan", "Michael_Jordan",
     ["Michael_Jordan", "Michael_B_Jordan", "Jordan_country", "Jordan_River"]),
    ("Barcelona won the league again with a late goal.", "Barcelona", "Barcelona",
     ["Barcelona", "Barcelona_Province"]),
    ("As governor, Reagan raised taxes in Sacramento.", "governor", "Governor",
     ["Governor", "Governor_of_California", "Ronald_Reagan"]),
    ("Mercury sang Bohemian Rhapsody at Wembley.", "Mercury", "Freddie_Mercury",
     ["Freddie_Mercury", "Mercury_planet", "Phoenix_Mercury"]),
]


def mini_kore():
    docs, mentions = [], []
    for i, (text, surf, gold, cands) in enumerate(KORE_SENTENCES):
        mention = {"type": "mention", "mention_id": f"kore-{i + 1:02d}", "gold": gold,
                   "candidates": cands}
        marks = [(surf, mention)]
        if "Reagan" in text:
            extra = {"type": "mention", "mention_id": f"kore-{i + 1:02d}b", "gold": "Ronald_Reagan",
                     "candidates": ["Ronald_Reagan", "Governor_of_California"]}
            marks.append(("Reagan", extra))
        if text.startswith("Tiger"):
            extra = {"type": "mention", "mention_id": f"kore-{i + 1:02d}a", "gold": "Tiger_Woods",
                     "candidates": ["Tiger_Woods", "Fox_Sports"]}
            marks.insert(0, ("Tiger", extra))
        doc, ms = make_doc(f"kore-doc-{i + 1:02d}", [(text, marks)])
        docs.append(doc)
        mentions.extend(ms)
    return docs, mentions


# Sports context pulls a context-biased reader towards the team; the gold is
# the place (or another non-team reading).
PHOENIX_CASES = [
    ("A six-game series begins this Friday in Phoenix and the team hopes to get O'Neal back.",
     "Phoenix", "Phoenix_Arizona", "Phoenix_Suns",
     ["Phoenix_Suns", "Phoenix_Arizona", "Phoenix_Mars_Lander", "Phoenix_Marvel_Comics"]),
    ("The playoff tickets sold out as fans flew into Phoenix for the final.",
     "Phoenix", "Phoenix_Arizona", "Phoenix_Mercury",
     ["Phoenix_Mercury", "Phoenix_Suns", "Phoenix_Arizona", "Phoenix_band"]),
    ("The striker signed a new contract while on holiday in Barcelona.",
     "Barcelona", "Barcelona_Province", "Barcelona",
     ["Barcelona", "Barcelona_Province"]),
    ("After the derby the coach flew back to Paris with the squad.",
     "Paris", "Paris", "Paris_Saint_Germain",
     ["Paris_Saint_Germain", "Paris", "Paris_Hilton", "Paris_Texas_film"]),
    ("The team trained for a week beside the Jordan before the tournament.",
     "Jordan", "Jordan_River", "Michael_Jordan",
     ["Michael_Jordan", "Jordan_River", "Jordan_country", "Michael_B_Jordan"]),
    ("The Phoenix lander beamed pictures home while the Suns game was on TV.",
     "Phoenix", "Phoenix_Mars_Lander", "Phoenix_Suns",
     ["Phoenix_Suns", "Phoenix_Mars_Lander", "Phoenix_Arizona", "Phoenix_mythology"]),
]


def phoenix():
    docs, mentions, baseline = [], [], []
    for i, (text, surf, gold, biased, cands) in enumerate(PHOENIX_CASES):
        mid = f"phx-{i + 1:02d}"
        mention = {"type": "mention", "mention_id": mid, "gold": gold, "candidates": cands}
        doc, ms = make_doc(f"phx-doc-{i + 1:02d}", [(text, [(surf, mention)])])
        docs.append(doc)
        mentions.extend(ms)
        baseline.append({"mention_id": mid, "ordinal": 0, "answer": str(cands.index(biased) + 1)})
    return docs, mentions, baseline


def datasets():
    _, typings = yago_sample()
    docs, mentions = mini_dataset(typings)
    write(DATA / "datasets" / "mini.jsonl", jsonl(docs + mentions))
    tags = [{"mention_id": m["mention_id"], "tag": t}
            for m, t in zip(mentions[1::9], ["llm", "ambiguous", "kg", "ground_truth", "llm", "llm"])]
    write(DATA / "datasets" / "mini_error_tags.jsonl", jsonl(tags))

    docs, mentions = mini_kore()
    write(DATA / "datasets" / "mini_kore.jsonl", jsonl(docs + mentions))
    chars = sum(len(d["text"]) for d in docs) / len(docs)
    write(DATA / "datasets" / "mini_kore.manifest.json", json.dumps(
        {"documents": len(docs), "mentions": len(mentions), "avg_characters": chars},
        indent=2) + "\n")

    docs, mentions, baseline = phoenix()
    write(DATA / "datasets" / "phoenix.jsonl", jsonl(docs + mentions))
    write(DATA / "scripts" / "phoenix_baseline.jsonl", jsonl(baseline))

    fig1_doc = {"type": "doc", "doc_id": "fig1",
                "text": "Justin was the big winner at the MTV awards last night."}
    fig1 = {"type": "mention", "mention_id": "fig1-justin", "doc_id": "fig1", "surface": "Justin",
            "start": 0, "end": 6, "gold": "JustinBieber",
            "candidates": ["JustinTrudeau", "JustinBieber", "JustinTimberlake"]}
    write(DATA / "datasets" / "fig1.jsonl", jsonl([fig1_doc, fig1]))
    write(DATA / "scripts" / "fig1.jsonl", jsonl([
        {"mention_id": "fig1-justin", "ordinal": 0, "answer": "Musician"},
        {"mention_id": "fig1-justin", "ordinal": 1, "answer": "JustinBieber"}]))
    write(DATA / "datasets" / "fig1.txt", fig1_doc["text"] + "\n")


# ---------------------------------------------------------------------------
# Descriptions

FIXTURE_DESCRIPTIONS = {
    "JustinBieber": "Justin Drew Bieber is a Canadian singer. He was discovered by American "
                    "record executive Scooter Braun and signed with RBMG Records in 2008, gaining "
                    "recognition with the release of his debut seven-track EP My World (2009) and "
                    "soon establishing himself as a teen idol. With the release of his debut "
                    "studio album My World 2.0 (2010), Bieber became the youngest solo male act "
                    "to top the Billboard 200 in 47 years.",
    "JustinTimberlake": "Justin Randall Timberlake is an American singer, songwriter, actor, and "
                        "record producer. Dubbed the Prince of Pop, he is one of the best-selling "
                        "music artists of all time, with over 88 million records sold worldwide "
                        "as a solo artist. He came to prominence as a member of the boy band "
                        "NSYNC in the late 1990s.",
    "JustinTrudeau": "Justin Pierre James Trudeau is a Canadian politician who served as the "
                     "23rd prime minister of Canada.",
    "Phoenix_Arizona": "Phoenix is the capital and most populous city of the U.S. state of "
                       "Arizona, with 1,608,139 residents as of 2020. It is the fifth-most "
                       "populous city in the United States and the most populous state capital "
                       "in the country, the only state capital with a population of more than "
                       "one million residents.",
    "Phoenix_Suns": "The Phoenix Suns are an American professional basketball team based in "
                    "Phoenix, Arizona. They compete in the National Basketball Association.",
    "Phoenix_Mars_Lander": "Phoenix was an uncrewed space probe that landed on the surface of "
                           "Mars on May 25, 2008, and operated until November 2, 2008.",
    "Phoenix_Marvel_Comics": "Phoenix is a cosmic entity appearing in American comic books "
                             "published by Marvel Comics.",
    "Barcelona": "Barcelona is a city on the northeastern coast of Spain. It is the capital and "
                 "largest city of the autonomous community of Catalonia.",
    "Barcelona_Province": "Barcelona is a province of eastern Spain, centrally located in "
                          "Catalonia.",
    "Paris": "Paris is the capital and largest city of France. With an estimated population of "
             "2,102,650 residents in January 2023 in an area of more than 105 km², Paris is the "
             "fourth-most populous city in the European Union and the 30th most densely "
             "populated city in the world in 2022.",
    "Michael_Jordan": "Michael Jeffrey Jordan, also known by his initials MJ, is an American "
                      "businessman and former professional basketball player.",
    "Jordan_River": "The Jordan River or River Jordan (Arabic: نهر الأردن, Nahr al-ʾUrdunn; "
                    "Hebrew: נְהַר הַיַּרְדֵּן, Nehar hayYardēn) is a 251-kilometre-long endorheic "
                    "river in the Levant that flows roughly north to south through the Sea of "
                    "Galilee and drains to the Dead Sea.",
    "US_Open_golf": "The United States Open Championship, commonly known as the U.S. Open, is "
                    "the annual open national championship of golf in the United States.",
    "US_Open_tennis": "The US Open Tennis Championships is a hardcourt tennis tournament held "
                      "annually in Queens, New York.",
    "Tiger_Woods": "Eldrick Tont \"Tiger\" Woods is an American professional golfer.",
    "Fox_Sports": "Fox Sports is the brand name for the sports division of the Fox "
                  "Broadcasting Company.",
    "Aristotle_Onassis": "Aristotle Socrates Onassis was a Greek-Argentine shipping magnate "
                         "who amassed the world's largest privately owned shipping fleet.",
    "Governor": "A governor is an administrative leader and head of a polity or political "
                "region, in some cases, such as governors-general, as the head of a state's "
                "official representative.",
    "Madonna": "Madonna Louise Ciccone is an American singer, songwriter, and actress. "
               "Known as the Queen of Pop · Ünïcödé test · she is noted for her continual "
               "reinvention and versatility in music production, songwriting and visual "
               "presentation. «Madonna» has pushed the boundaries of artistic expression in "
               "mainstream music.",
    "Freddie_Mercury": "Freddie Mercury (born Farrokh Bulsara) was a British singer and "
                       "songwriter who achieved global fame as the lead vocalist and pianist "
                       "of the rock band Queen. 🎤",
}


def description_record(entity, text):
    return {"entity": entity, "text": text, "fetched_at": FETCHED_AT, "source": "fixture"}


def descriptions():
    assert len(FIXTURE_DESCRIPTIONS) == 20
    records = [description_record(e, t) for e, t in sorted(FIXTURE_DESCRIPTIONS.items())]
    write(DATA / "descriptions" / "fixture20.jsonl", jsonl(records))

    # Warmed cache for every entity in the YAGO-style sample; one in seven is
    # recorded as absent.
    _, typings = yago_sample()
    warm = []
    for i, (entity, classes) in enumerate(sorted(typings)):
        if entity in FIXTURE_DESCRIPTIONS:
            warm.append(description_record(entity, FIXTURE_DESCRIPTIONS[entity]))
        elif i % 7 == 3:
            warm.append(description_record(entity, None))
        else:
            readable = entity.replace("_", " ")
            kinds = " and ".join(classes)
            warm.append(description_record(entity, f"{readable} is an entity of type {kinds}."))
    write(DATA / "descriptions" / "yago_sample.jsonl", jsonl(warm))


# ---------------------------------------------------------------------------
# Reference tables transcribed from the published results.

TABLE2_DATASETS = ["KORE", "ACE04", "OKE16", "R500", "OKE15", "R128", "MSN", "AQU", "WIKI", "CWEB"]
TABLE2 = {
    "Baseline": ([68.2, 89.1, 59.0, 77.4, 64.1, 68.7, 82.3, 62.4, 69.5, 65.0],
                 [76.5, 95.4, 82.2, 85.3, 82.2, 83.6, 94.0, 96.2, 89.4, 89.3],
                 [89.3, 93.4, 71.7, 90.8, 78.0, 82.1, 87.5, 64.8, 77.7, 72.8]),
    "ReFinED": ([56.7, 86.4, 79.4, 70.8, 78.1, 68.0, 89.1, 86.1, 84.1, 73.8],
                [88.0, 96.9, 90.3, 92.1, 90.3, 91.1, 97.0, 98.1, 94.4, 94.3],
                [64.4, 89.1, 87.9, 76.8, 86.4, 74.6, 91.8, 87.7, 89.0, 78.2]),
    "ChatEL": ([78.7, 89.3, 75.2, 82.2, 75.8, 78.9, 88.1, 76.7, 79.1, 70.9],
               [88.0, 96.9, 90.3, 92.1, 90.3, 91.1, 97.0, 98.1, 94.4, 94.3],
               [89.4, 92.1, 83.2, 89.2, 83.9, 86.6, 90.8, 78.1, 83.7, 75.1]),
    "Our_DBpedia": ([71.3, 89.4, 65.9, 75.4, 73.5, 75.0, 84.2, 72.0, 72.5, 67.7],
                    [80.1, 95.7, 79.8, 85.6, 82.2, 85.9, 94.1, 96.3, 90.4, 89.4],
                    [88.9, 93.3, 82.5, 88.0, 89.3, 87.3, 89.4, 74.8, 80.2, 75.7]),
    "Our_YAGO": ([71.8, 88.7, 65.8, 78.3, 70.3, 75.8, 81.2, 72.0, 74.4, 69.6],
                 [79.6, 94.3, 83.7, 85.2, 82.3, 84.8, 92.2, 94.4, 88.9, 89.3],
                 [90.1, 94.0, 78.6, 91.9, 85.4, 89.4, 88.0, 76.2, 83.6, 77.9]),
}


def reference_tables():
    lines = ["# provenance: results table for inKB micro-F1 on ten ED datasets, as published;",
             "# values are percentages rounded to one decimal by the original authors.",
             "system\tdataset\tf1\tgold_f1\tpct_gold"]
    for system, (f1, gold, pct) in TABLE2.items():
        for i, name in enumerate(TABLE2_DATASETS):
            lines.append(f"{system}\t{name}\t{f1[i]:.1f}\t{gold[i]:.1f}\t{pct[i]:.1f}")
    write(DATA / "reference" / "table2.tsv", "\n".join(lines) + "\n")
    write(DATA / "reference" / "table4.tsv", "\n".join([
        "# provenance: iteration histogram of the pruning loop with GPT-3.5, as published.",
        "# documented target only; depends on the original LLM.",
        "kg\t1\t2\t3\t4\t5\t6\tmean",
        "YAGO\t26.24\t37.36\t26.60\t8.30\t1.32\t0.15\t2.21",
        "DBpedia\t23.57\t43.00\t26.68\t6.12\t0.42\t0.01\t2.18", ""]))
    write(DATA / "reference" / "table3.tsv", "\n".join([
        "# provenance: snapshot statistics of the full knowledge graphs, as published.",
        "kg\tinstances\tclasses\tavg_tree_depth\tavg_branching_factor",
        "DBpedia\t5044223\t760\t3.51\t4.53",
        "YAGO\t6349359\t819292\t6.61\t8.48", ""]))
    write(DATA / "reference" / "table1_kore.tsv", "\n".join([
        "# provenance: dataset statistics for KORE, as published.",
        "dataset\tdocuments\tmentions\tavg_characters",
        "KORE\t50\t144\t76.4", ""]))


def main():
    snapshots()
    datasets()
    descriptions()
    reference_tables()


if __name__ == "__main__":
    main()
