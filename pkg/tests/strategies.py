"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from amor.manifest import manifest_from_dict

# printable WinAnsi letters, so generated names are always renderable
NAME_CHARS = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyzäöüéñçß'-"
ID_CHARS = "abcdefghijklmnopqrstuvwxyz0123456789_"

names = st.text(NAME_CHARS, min_size=1, max_size=9)
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@st.composite
def manifest_docs(draw, min_n=1, max_n=6, renderable=False):
    """A decoded manifest document that validates cleanly.

    ``renderable`` keeps text short enough to lay out on a Letter page.
    """
    n = draw(st.integers(min_n, max_n))
    ids = draw(st.lists(st.text(ID_CHARS, min_size=1, max_size=8), min_size=n, max_size=n, unique=True))
    n_aff = draw(st.integers(0, 3))
    affiliations = draw(st.lists(st.text(NAME_CHARS + " ", min_size=1, max_size=20 if renderable else 40),
                                 min_size=n_aff, max_size=n_aff))
    authors = []
    for author_id in ids:
        given, family = draw(names), draw(names)
        a = {"id": author_id, "display_name": f"{given} {family}"}
        if draw(st.booleans()):
            a["given_name"] = given
            a["family_name"] = family
        if n_aff:
            a["affiliations"] = draw(st.lists(st.integers(1, n_aff), max_size=2, unique=True))
        if draw(st.booleans()):
            a["p_appear"] = draw(unit)
        authors.append(a)
    doc = {"authors": authors}

    pairs = [(a, b) for i, a in enumerate(ids) for b in ids[i + 1:]]
    if pairs and draw(st.booleans()):
        chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3))
        cut = draw(st.integers(0, len(chosen)))
        flip = draw(st.booleans())
        doc["constraints"] = {
            "never_together": [list(p[::-1] if flip else p) for p in chosen[:cut]],
            "never_adjacent": [list(p) for p in chosen[cut:]],
        }
    if draw(st.booleans()):
        doc["title"] = draw(st.text(NAME_CHARS + " ", max_size=30))
    if n_aff:
        doc["affiliations"] = affiliations
    if draw(st.booleans()):
        doc["style"] = {
            "font_size_pt": draw(st.sampled_from([9, 10, 11, 12.5])) if renderable
            else draw(st.floats(1, 40)),
            "separator": draw(st.sampled_from([", ", "; ", " / ", " "])),
        }
    if draw(st.booleans()):
        doc["playback"] = {
            "fps": draw(st.floats(0.5, 60)),
            "frame_budget": draw(st.integers(1, 40)),
            "loop": draw(st.booleans()),
            "autoplay": draw(st.booleans()),
            "controls": draw(st.booleans()),
            "seed": draw(st.integers(0, 2**64 - 1)),
        }
    return doc


def manifests(**kwargs):
    return manifest_docs(**kwargs).map(manifest_from_dict)
