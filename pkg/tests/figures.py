"""Reference quivers transcribed by hand from published drawings."""

# Gamma for the symmetric group on 7 letters
A7_VERTICES = [
    "7", "61", "52", "511", "43", "421", "4111", "331", "322", "3211",
    "31111", "2221", "22111", "211111", "1111111",
]
A7_ARROWS = {
    ("211111", "31111"): 1,
    ("31111", "4111"): 1,
    ("22111", "3211"): 1,
    ("4111", "511"): 1,
    ("3211", "511"): 1,
    ("3211", "421"): 1,
    ("3211", "331"): 1,
    ("2221", "322"): 1,
    ("511", "61"): 1,
    ("421", "61"): 1,
    ("421", "52"): 1,
    ("421", "43"): 1,
    ("331", "43"): 1,
    ("322", "52"): 1,
    ("61", "7"): 1,
    ("52", "7"): 1,
    ("43", "7"): 1,
}

# Gamma for the hyperoctahedral group of rank 6; "0" is the empty partition
B6_VERTICES = [
    "111111", "21111", "11111", "411", "321", "222", "311", "221", "211", "111",
    "6", "5", "4", "3", "2", "1",
    "3111", "2211", "2111", "1111",
    "51", "42", "33", "41", "32", "31", "22", "21", "11", "0",
]
B6_ARROWS = {
    ("21111", "411"): 1,
    ("21111", "111"): 1,
    ("411", "6"): 1,
    ("411", "1"): 1,
    ("321", "6"): 2,
    ("321", "3"): 1,
    ("321", "2"): 1,
    ("321", "1"): 1,
    ("311", "5"): 1,
    ("311", "1"): 1,
    ("221", "5"): 1,
    ("221", "2"): 1,
    ("211", "4"): 1,
    ("211", "1"): 1,
    ("3111", "51"): 1,
    ("3111", "11"): 1,
    ("2211", "42"): 1,
    ("2211", "21"): 1,
    ("2211", "51"): 1,
    ("2111", "41"): 1,
    ("2111", "11"): 1,
    ("51", "0"): 1,
    ("42", "0"): 1,
    ("41", "0"): 1,
    ("32", "0"): 1,
    ("31", "0"): 1,
    ("21", "0"): 1,
}
