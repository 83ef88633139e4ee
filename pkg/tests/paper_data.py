"""Golden matrices transcribed from the printed source, used as exact oracles.

Both inverses were checked offline by exact multiplication against their
matrices before being frozen here; the tests re-verify that product.
"""

L_13 = [
    [3, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 3, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 3, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 3, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0],
    [0, 1, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 3, 0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 3, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 3, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1],
    [1, 0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
]

L_13_INV = [
    ["1/3", "-1/9", "-1/9", "-1/9", "0", "1/3", "-1/3", "0", "0", "0", "0", "0", "0"],
    ["0", "2/9", "-1/9", "-1/9", "0", "1/3", "-1/3", "0", "0", "0", "0", "0", "0"],
    ["0", "-1/9", "2/9", "-1/9", "0", "1/3", "-1/3", "0", "0", "0", "0", "0", "0"],
    ["0", "-1/9", "-1/9", "2/9", "0", "1/3", "-1/3", "0", "0", "0", "0", "0", "0"],
    ["-1/9", "-1/27", "2/27", "2/27", "0", "-1/9", "1/9", "2/9", "-1/9", "-1/9", "0", "1/3", "-1/3"],
    ["-1/9", "2/27", "-1/27", "2/27", "0", "-1/9", "1/9", "-1/9", "2/9", "-1/9", "0", "1/3", "-1/3"],
    ["-1/9", "2/27", "2/27", "-1/27", "0", "-1/9", "1/9", "-1/9", "-1/9", "2/9", "0", "1/3", "-1/3"],
    ["0", "1/3", "1/3", "1/3", "0", "-1", "1", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "1", "0", "0", "0", "0", "0", "0"],
    ["1/3", "-1/9", "-1/9", "-1/9", "0", "0", "0", "1/3", "1/3", "1/3", "0", "-1", "1"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "1"],
    ["0", "-1/3", "-1/3", "-1/3", "1", "1", "-1", "0", "0", "0", "0", "0", "0"],
    ["-1/3", "1/9", "1/9", "1/9", "0", "0", "0", "-1/3", "-1/3", "-1/3", "1", "1", "-1"],
]

L_8 = [
    [7, 0, 0, 0, 0, 1, 0, 0],
    [0, 7, 0, 1, 0, 1, 0, 0],
    [0, 0, 7, 0, 1, 1, 0, 0],
    [0, 0, 0, 3, 0, 1, 0, 0],
    [0, 0, 0, 0, 3, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 1],
    [1, 1, 1, 1, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 1, 0],
]

L_8_INV = [
    ["6/49", "-1/49", "-1/49", "-2/49", "-2/49", "0", "1/7", "-1/7"],
    ["-2/147", "19/147", "-2/147", "-11/147", "-4/147", "0", "2/21", "-2/21"],
    ["-2/147", "-2/147", "19/147", "-4/147", "-11/147", "0", "2/21", "-2/21"],
    ["-1/21", "-1/21", "-1/21", "5/21", "-2/21", "0", "1/3", "-1/3"],
    ["-1/21", "-1/21", "-1/21", "-2/21", "5/21", "0", "1/3", "-1/3"],
    ["1/7", "1/7", "1/7", "2/7", "2/7", "0", "-1", "1"],
    ["0", "0", "0", "0", "0", "0", "0", "1"],
    ["-1/7", "-1/7", "-1/7", "-2/7", "-2/7", "1", "1", "-1"],
]
