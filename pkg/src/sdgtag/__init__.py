"""sdgtag: classify text against the 17 UN Sustainable Development Goals.

Pipeline: merge multi-source SDG keyword datasets into one ontology, link
terms to a Fields-of-Study catalog by Levenshtein similarity, tag input text
with FOS via TF-IDF cosine similarity, and score the FOS overlap per SDG
into Strong/Moderate/None labels.
"""

__version__ = "0.1.0"

ENGINE_VERSION = __version__
