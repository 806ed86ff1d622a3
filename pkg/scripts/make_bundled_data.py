#!/usr/bin/env python3
"""Regenerate the bundled data files (starter lexicon + synthetic corpus).

The outputs are committed; rerunning with the same seed reproduces them
byte-identically.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "roengine" / "data"

# ---------------------------------------------------------------------------
# Lexicon
# ---------------------------------------------------------------------------

# domain -> [(label, [lemmas], [extra domains])]; single-lemma entries may be
# given as a bare string
DOMAIN_CONCEPTS: dict[str, list] = {
    "Hydrology": [
        ("Reservoir", ["reservoir", "artificial lake", "man-made lake"], []),
        "river", "groundwater", "aquifer", "watershed", "precipitation",
        "flood", "drought", "runoff", "evaporation", "snowpack", "rainfall",
        "streamflow", "water table", "irrigation", "wetland", "river basin",
        ("Water Quality", ["water quality"], []),
    ],
    "Oceanography": [
        ("Ocean Current", ["ocean current", "current"], []),
        "tide", "salinity", ("Sea Level", ["sea level"], []), "thermocline",
        "upwelling", "gyre", ("Sea Surface Temperature", ["sea surface temperature"], []),
        ("Wave Height", ["wave height"], []), "bathymetry", "seafloor",
        "continental shelf", "abyssal plain", "hydrothermal vent",
        ("Marine Litter", ["marine litter", "marine debris"], []),
        "buoy", "sonar", ("Research Vessel", ["research vessel"], []),
    ],
    "Marine Biology": [
        "plankton", "jellyfish", ("Coral Reef", ["coral reef", "reef"], []),
        ("Fish Stock", ["fish stock"], []), ("Marine Mammal", ["marine mammal"], []),
        "whale", "dolphin", "seagrass", "biodiversity", "larva",
        ("Invasive Species", ["invasive species", "alien species"], ["Ecology"]),
        ("Habitat Suitability", ["habitat suitability"], ["Ecology"]),
        "spawning", "benthos", "cetacean", "porpoise", "krill",
    ],
    "Geology": [
        "rock", "mineral", "sediment", "stratum", "erosion", "fault",
        ("Plate Tectonics", ["plate tectonics", "tectonics"], []),
        "subduction", "basalt", "granite", "outcrop", "borehole",
        ("Land Monitoring", ["land monitoring"], []),
        ("Monitoring", ["monitoring"], []),
        ("Change Detection", ["change detection"], []),
        "landslide", "geodesy", "lithosphere",
    ],
    "Volcanology": [
        "volcano", "eruption", "lava", "magma", ("Ash Plume", ["ash plume", "ash cloud"], []),
        "caldera", ("Pyroclastic Flow", ["pyroclastic flow"], []),
        "fumarole", "vent", ("Volcanic Unrest", ["volcanic unrest", "unrest"], []),
        ("Ground Deformation", ["ground deformation", "deformation"], ["Seismology"]),
        "geyser", "tephra", "lahar", "crater",
    ],
    "Seismology": [
        "earthquake", ("Seismic Wave", ["seismic wave"], []), "epicenter",
        "aftershock", "tremor", "seismometer", "magnitude", "hypocenter",
        ("Seismic Hazard", ["seismic hazard"], []), "fault slip",
        ("Strong Motion", ["strong motion"], []), "microseism",
    ],
    "Climatology": [
        ("Climate Change", ["climate change"], []),
        ("Global Warming", ["global warming"], []),
        ("Greenhouse Gas", ["greenhouse gas", "carbon dioxide"], []),
        ("Temperature Anomaly", ["temperature anomaly"], []),
        ("El Nino", ["el nino"], []), "monsoon", "paleoclimate",
        ("Sea Ice", ["sea ice"], []), "permafrost", "albedo",
        ("Carbon Cycle", ["carbon cycle"], []), "reanalysis",
    ],
    "Meteorology": [
        ("Wind Speed", ["wind speed"], []), "humidity",
        ("Atmospheric Pressure", ["atmospheric pressure", "air pressure"], []),
        "aerosol", ("Cloud Cover", ["cloud cover"], []), "cyclone",
        "storm", "lightning", "visibility", "radiosonde",
    ],
    "Remote Sensing": [
        ("Satellite Image", ["satellite image", "satellite imagery"], []),
        "radar", "lidar", ("Spectral Band", ["spectral band"], []),
        "interferogram", ("Synthetic Aperture Radar", ["synthetic aperture radar", "sar"], []),
        ("Image Processing", ["image processing"], ["Graphic"]),
        ("Segmentation and Reassembly", ["segmentation and reassembly", "segmentation"], ["Graphic"]),
        ("Image Archive", ["image archive"], ["Graphic"]),
        "orthophoto", "georeferencing", ("Ground Truth", ["ground truth"], []),
        "swath", "nadir", ("Earth Observation", ["earth observation"], []),
    ],
    "Ecology": [
        "ecosystem", "habitat", ("Species Distribution", ["species distribution"], []),
        ("Food Web", ["food web"], []), "population", "vegetation",
        "biomass", ("Nature Reserve", ["nature reserve"], []),
        "pollination", ("Ecological Niche", ["ecological niche", "niche"], []),
        "phenology", "biome",
    ],
    "Geography": [
        "coastline", "estuary", "lagoon", "delta", "island", "peninsula",
        "archipelago", "fjord", "dune", "terrain", "elevation",
        ("Digital Elevation Model", ["digital elevation model"], ["Remote Sensing"]),
    ],
    "Data Science": [
        "workflow", "dataset", "algorithm", ("Time Series", ["time series"], []),
        "model", "simulation", "provenance", "metadata", "repository",
        ("Machine Learning", ["machine learning"], []),
        "calibration", "validation", "interpolation", "visualization",
        ("Quality Control", ["quality control"], []),
    ],
    "Soil Science": [
        "soil", "loam", "clay", "humus", ("Soil Moisture", ["soil moisture"], []),
        "topsoil", "salinization", ("Soil Erosion", ["soil erosion"], []),
        "pedology", "compaction",
    ],
    "Glaciology": [
        "glacier", ("Ice Sheet", ["ice sheet"], []), "iceberg", "crevasse",
        "moraine", ("Ice Core", ["ice core"], []), "firn",
        ("Glacial Retreat", ["glacial retreat"], []),
    ],
    "Biology": [
        "species", "organism", "taxonomy", "genome", "microbe",
        "specimen", "morphology", ("Life Cycle", ["life cycle"], []),
    ],
}

STOPWORDS = [
    "a", "an", "and", "are", "as", "at", "be", "been", "but", "by", "can",
    "did", "do", "does", "for", "from", "had", "has", "have", "he", "her",
    "his", "how", "if", "in", "into", "is", "it", "its", "may", "more",
    "most", "no", "not", "of", "on", "or", "our", "she", "so", "such",
    "than", "that", "the", "their", "them", "then", "there", "these",
    "they", "this", "those", "to", "was", "we", "were", "what", "when",
    "where", "which", "while", "who", "will", "with", "you",
]

GAZETTEER = {
    "UN": "Organization",
    "UNESCO": "Organization",
    "NASA": "Organization",
    "NOAA": "Organization",
    "European Space Agency": "Organization",
    "ESA": "Organization",
    "British Geological Survey": "Organization",
    "National Ecological Observatory Network": "Organization",
    "Black Sea": "Place",
    "Mediterranean Sea": "Place",
    "Adriatic Sea": "Place",
    "North Atlantic": "Place",
    "Mount Etna": "Place",
    "Campi Flegrei": "Place",
    "Iceland": "Place",
    "Venice Lagoon": "Place",
    "Elizabeth Mary": "Person",
}


def build_lexicon() -> dict:
    concepts = {}
    for domain, entries in DOMAIN_CONCEPTS.items():
        for entry in entries:
            if isinstance(entry, str):
                label = entry.title()
                lemmas = [entry]
                extra: list[str] = []
            else:
                label, lemmas, extra = entry
            cid = "c:" + label.lower().replace(" ", "-")
            concepts[cid] = {
                "lemmas": lemmas,
                "domains": [domain] + extra,
                "label": label,
            }
    return {"concepts": concepts, "stopwords": STOPWORDS, "gazetteer": GAZETTEER}


# ---------------------------------------------------------------------------
# Synthetic corpus
# ---------------------------------------------------------------------------

CATEGORY_EDGES = [
    ("oceanography", "earth_science"),
    ("geology", "earth_science"),
    ("hydrology", "earth_science"),
    ("climatology", "earth_science"),
    ("marine_biology", "oceanography"),
    ("marine_geology", "oceanography"),
    ("marine_botany", "marine_biology"),
    ("cetology", "marine_biology"),
    ("ocean_exploration", "marine_geology"),
    ("volcanology", "geology"),
    ("seismology", "geology"),
]

CATEGORY_VOCAB = {
    "oceanography": ["ocean current", "salinity", "tide", "sea level", "upwelling",
                     "thermocline", "bathymetry", "buoy", "gyre", "sea surface temperature"],
    "marine_biology": ["plankton", "jellyfish", "coral reef", "marine mammal", "biodiversity",
                       "fish stock", "larva", "spawning", "benthos", "invasive species"],
    "marine_botany": ["seagrass", "algae", "kelp", "phytoplankton", "seaweed",
                      "photosynthesis", "meadow", "chlorophyll", "nutrient", "bloom"],
    "cetology": ["whale", "dolphin", "cetacean", "porpoise", "echolocation",
                 "migration", "pod", "baleen", "krill", "acoustic"],
    "marine_geology": ["seafloor", "sediment", "continental shelf", "abyssal plain",
                       "hydrothermal vent", "core sample", "turbidite", "seamount",
                       "basalt", "bathymetry"],
    "ocean_exploration": ["research vessel", "submersible", "sonar", "dive", "expedition",
                          "remotely operated vehicle", "mapping", "survey", "discovery",
                          "deep sea"],
    "volcanology": ["volcano", "eruption", "lava", "magma", "ash plume", "caldera",
                    "pyroclastic flow", "fumarole", "volcanic unrest", "tephra"],
    "seismology": ["earthquake", "seismic wave", "epicenter", "aftershock", "tremor",
                   "seismometer", "magnitude", "fault slip", "seismic hazard", "hypocenter"],
    "geology": ["rock", "mineral", "stratum", "erosion", "fault", "subduction",
                "plate tectonics", "outcrop", "borehole", "landslide"],
    "hydrology": ["reservoir", "river", "groundwater", "aquifer", "watershed",
                  "precipitation", "flood", "runoff", "streamflow", "water table"],
    "climatology": ["climate change", "global warming", "greenhouse gas", "temperature anomaly",
                    "el nino", "monsoon", "sea ice", "permafrost", "carbon cycle", "albedo"],
}

FILLER = ["study", "analysis", "data", "observation", "measurement", "region",
          "result", "method", "field", "report", "survey", "station", "sample",
          "annual", "trend", "variation", "process", "record", "instrument", "site"]

DOC_PLAN = [
    ("marine_biology", 7),
    ("marine_botany", 6),
    ("cetology", 6),
    ("marine_geology", 6),
    ("ocean_exploration", 6),
    ("volcanology", 7),
    ("seismology", 7),
    ("hydrology", 7),
    ("climatology", 8),
]

# a handful of documents carry a second category
EXTRA_ASSIGNMENTS = {
    "marine_biology-1": "marine_botany",
    "cetology-2": "marine_biology",
    "volcanology-3": "seismology",
    "marine_geology-4": "ocean_exploration",
    "climatology-5": "hydrology",
}

PARENTS = {child: parent for child, parent in CATEGORY_EDGES}


def doc_text(rng: random.Random, category: str) -> str:
    own = CATEGORY_VOCAB[category]
    parent = PARENTS.get(category)
    parent_pool = CATEGORY_VOCAB.get(parent, []) if parent else []
    title = " ".join(rng.sample(own, 3)).title()
    words = []
    for _ in range(70):
        roll = rng.random()
        if roll < 0.55:
            words.append(rng.choice(own))
        elif roll < 0.75 and parent_pool:
            words.append(rng.choice(parent_pool))
        else:
            words.append(rng.choice(FILLER))
    sentences = []
    i = 0
    while i < len(words):
        n = rng.randint(5, 9)
        chunk = words[i:i + n]
        if chunk:
            sentences.append("The " + " ".join(chunk) + ".")
        i += n
    return title + "\n" + " ".join(sentences) + "\n"


def build_corpus(out_dir: Path) -> None:
    rng = random.Random(7)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "articles").mkdir(exist_ok=True)
    (out_dir / "categories.tsv").write_text(
        "".join(f"{child}\t{parent}\n" for child, parent in CATEGORY_EDGES),
        encoding="utf-8",
    )
    assignments = []
    for category, count in DOC_PLAN:
        for i in range(1, count + 1):
            doc_id = f"{category}-{i}"
            assignments.append((doc_id, category))
            extra = EXTRA_ASSIGNMENTS.get(doc_id)
            if extra:
                assignments.append((doc_id, extra))
            (out_dir / "articles" / f"{doc_id}.txt").write_text(
                doc_text(rng, category), encoding="utf-8"
            )
    (out_dir / "assignments.tsv").write_text(
        "".join(f"{a}\t{c}\n" for a, c in assignments), encoding="utf-8"
    )


def main() -> None:
    lexicon = build_lexicon()
    lex_path = DATA / "lexicon" / "earth_science.json"
    lex_path.parent.mkdir(parents=True, exist_ok=True)
    lex_path.write_text(json.dumps(lexicon, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {lex_path} ({len(lexicon['concepts'])} concepts)")
    build_corpus(DATA / "synthetic_corpus")
    print(f"wrote {DATA / 'synthetic_corpus'}")


if __name__ == "__main__":
    main()
