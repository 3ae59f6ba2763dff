"""bricksim: a desk-scale simulator of computing buildings.

Random resistor/capacitor/memristor networks stand in for doped-concrete
bricks, each brick can be read out as a reservoir computer, and bricks
assemble into a wall that runs excitable cellular automata and a
fault-tolerant local communication network.
"""

__version__ = "0.1.0"
