# Pure mathematics: permutations, magmas, graphs, Cayley constructions, codecs
