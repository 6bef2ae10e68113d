"""Context-aware phishing detection for instant-message streams.

The package watches chat traffic, extracts what a message is about
(subject/predicate/object triplets against ontology lexicons), attaches a
harmful/harmless context to the keywords it finds, classifies each keyword
with an associative rule list, and raises colored alerts toward the victim
side of the conversation.
"""

__version__ = "0.1.0"
