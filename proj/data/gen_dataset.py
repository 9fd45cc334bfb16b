#!/usr/bin/env python3
"""Regenerates the bundled synthetic two-hop QA dataset.

30 single-chunk documents: 10 person->city facts (chunks 0-9), 10
city->country facts (chunks 10-19), 10 filler chunks (20-29). Each
question needs two hops: person -> birth city -> country.
"""

import json
from pathlib import Path

TRIPLES = [
    ("Alden Voss", "Marrowgate", "Veltria"),
    ("Petra Quillon", "Sundmere", "Okarvia"),
    ("Tobias Renk", "Ashfall", "Drunmark"),
    ("Ilsa Varn", "Coldquay", "Teslova"),
    ("Marek Dovan", "Brinehollow", "Quessia"),
    ("Greta Halloway", "Ferndale", "Ulmora"),
    ("Niko Strade", "Vetterburg", "Parvenna"),
    ("Selma Odell", "Lanterwick", "Hestria"),
    ("Rufus Calder", "Mirrowfen", "Zelvania"),
    ("Dora Winslet", "Gulltide", "Ambrovia"),
]

PROFESSIONS = [
    "cartographer", "glassblower", "astronomer", "shipwright", "botanist",
    "clockmaker", "archivist", "stonemason", "apothecary", "weaver",
]

CITY_TRADES = [
    "tanneries", "salt works", "observatories", "dry docks", "orchards",
    "bell foundries", "libraries", "quarries", "herb markets", "looms",
]

FILLERS = [
    "The northern trade routes freeze over for nearly four months each year. "
    "Caravans wait in roadside inns until the passes clear. Innkeepers record "
    "the names of travelers in heavy ledgers. Some ledgers survive in regional "
    "archives. Scholars study them to trace old commerce.",
    "Lighthouse keepers along the outer shoals work in pairs. One tends the "
    "lamp while the other logs passing vessels. Their logs note weather, cargo, "
    "and flags. Storms in autumn are the busiest season. Supplies arrive by "
    "tender once a fortnight.",
    "The guild of coopers sets the width of barrel staves every spring. "
    "Disputes over measurements are settled by a council of elders. Apprentices "
    "serve seven years before earning a mark. A cooper's mark is burned into "
    "every finished barrel. Forgery of marks is punished by expulsion.",
    "River pilots memorize the shifting sandbars of the delta. Charts are "
    "redrawn after every flood season. Pilot licenses pass from parent to "
    "child in many families. The pilots' association keeps a common fund for "
    "widows. Its meeting hall overlooks the customs quay.",
    "Mountain monasteries brew a dark tea from roasted barley. Pilgrims carry "
    "small bricks of it on long journeys. The recipe varies from valley to "
    "valley. Monks trade tea bricks for lamp oil and parchment. Travel "
    "accounts praise its warming properties.",
    "The mint issues new coinage only in years of good harvest. Old coins are "
    "clipped and reweighed by inspectors. Counterfeits are nailed to the mint "
    "door as warnings. Coin weights are checked against brass standards. The "
    "standards are kept in a triple-locked chest.",
    "Falconers in the eastern steppes train birds for three seasons. A trained "
    "falcon answers to a whistled call. Hoods are stitched from soft calfskin. "
    "Hunting parties ride out after the first frost. Game is shared according "
    "to ancient custom.",
    "Paper mills cluster along the fast streams of the foothills. Rag pickers "
    "supply the mills with linen scraps. The finest sheets are pressed for "
    "charter documents. Watermarks identify each mill's output. Mill owners "
    "guard their wire molds jealously.",
    "The observatory on the southern cape tracks comet returns. Its brass "
    "quadrant was cast by island founders. Night assistants copy readings into "
    "duplicate registers. One register travels to the capital each solstice. "
    "Clerks compare the copies line by line.",
    "Salt caravans cross the white flats before dawn. Drivers navigate by "
    "cairns and star lines. Each camel carries two hundredweight of salt. "
    "Toll stations stamp the caravan papers. The stamps are collected by "
    "customs scribes at the coast.",
]


def person_doc(person, city, profession):
    return (
        f"{person} was a {profession} from the northern provinces. "
        f"Years of travel filled many notebooks with careful observations. "
        f"Records show that {person} was born in {city}. "
        f"Colleagues described the work as meticulous and patient. "
        f"Several journals survive in private collections."
    )


def city_doc(city, country, trade):
    return (
        f"{city} is a walled city known for its {trade}. "
        f"Merchants gather there every spring for the great fair. "
        f"{city} is located in the country of {country}. "
        f"The markets sell salted fish, wool, and copper wares. "
        f"Its bridges are carved from gray stone."
    )


def main():
    root = Path(__file__).parent
    docs, questions = [], []
    full_scenarios, naive_scenarios, rag_scenarios = {}, {}, {}

    for i, (person, city, _) in enumerate(TRIPLES):
        docs.append({"doc_id": f"person_{i}", "text": person_doc(person, city, PROFESSIONS[i])})
    for i, (_, city, country) in enumerate(TRIPLES):
        docs.append({"doc_id": f"city_{i}", "text": city_doc(city, country, CITY_TRADES[i])})
    for i, text in enumerate(FILLERS):
        docs.append({"doc_id": f"filler_{i}", "text": text})

    for i, (person, city, country) in enumerate(TRIPLES):
        qid = f"q{i}"
        question = f"In which country was {person} born?"
        questions.append({
            "question_id": qid,
            "question": question,
            "gold_answers": [country],
        })
        full_scenarios[qid] = {"steps": [
            {"tool": "keyword_search", "arguments": {"keywords": [person], "top_k": 5}},
            {"tool": "chunk_read", "arguments": {"chunk_ids": [str(i)]},
             "expect_last_contains": f"chunk_id={i}"},
            {"tool": "keyword_search", "arguments": {"keywords": [city], "top_k": 5},
             "expect_last_contains": f"born in {city}"},
            {"tool": "chunk_read", "arguments": {"chunk_ids": [str(10 + i)]}},
            {"text": f"{person} was born in {city}, which is located in {country}.",
             "expect_last_contains": f"country of {country}"},
        ]}
        naive_scenarios[qid] = {"steps": [
            {"tool": "naive_embedding_search", "arguments": {"query": question, "top_k": 5}},
            {"text": f"{person} was born in {city}, which is located in {country}."},
        ]}
        # naive_rag makes a single no-tools call: one text step only.
        rag_scenarios[qid] = {"steps": [
            {"text": f"{person} was born in {city}, which is located in {country}."},
        ]}

    (root / "corpus.jsonl").write_text(
        "".join(json.dumps(d) + "\n" for d in docs))
    (root / "questions.jsonl").write_text(
        "".join(json.dumps(q) + "\n" for q in questions))
    (root / "scenarios_arag_full.json").write_text(
        json.dumps({"scenarios": full_scenarios}, indent=2) + "\n")
    (root / "scenarios_arag_naive.json").write_text(
        json.dumps({"scenarios": naive_scenarios}, indent=2) + "\n")
    (root / "scenarios_naive_rag.json").write_text(
        json.dumps({"scenarios": rag_scenarios}, indent=2) + "\n")
    print(f"wrote {len(docs)} docs, {len(questions)} questions")


if __name__ == "__main__":
    main()
