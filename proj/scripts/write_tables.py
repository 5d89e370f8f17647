#!/usr/bin/env python3
"""Writes the bundled romanization tables under data/tables/.

Kept as a script so the tables can be regenerated or extended in one place;
the checked-in .tsv files are the artifact the library loads.
"""

import os

HEADER = "# {script} -> Latin mapping\n# source<TAB>target[<TAB>context]\n"

CYRL = """
А	A
а	a
Б	B
б	b
В	V
в	v
Г	G
г	g
Д	D
д	d
Е	Ye	initial
Е	E
е	ye	initial
е	e
Ё	Yo
ё	yo
Ж	Zh
ж	zh
З	Z
з	z
И	I
и	i
Й	Y
й	y
К	K
к	k
Л	L
л	l
М	M
м	m
Н	N
н	n
О	O
о	o
П	P
п	p
Р	R
р	r
С	S
с	s
Т	T
т	t
У	U
у	u
Ф	F
ф	f
Х	Kh
х	kh
Ц	Ts
ц	ts
Ч	Ch
ч	ch
Ш	Sh
ш	sh
Щ	Shch
щ	shch
Ъ	<del>
ъ	<del>
Ы	Y
ы	y
Ь	'
ь	'
Э	E
э	e
Ю	Yu
ю	yu
Я	Ya
я	ya
Є	Ye
є	ye
І	I
і	i
Ї	Yi
ї	yi
Ґ	G
ґ	g
Ў	U
ў	u
Ђ	Dj
ђ	dj
Ј	J
ј	j
Љ	Lj
љ	lj
Њ	Nj
њ	nj
Ћ	C
ћ	c
Џ	Dz
џ	dz
Ѓ	G
ѓ	g
Ќ	K
ќ	k
Ѕ	Dz
ѕ	dz
Ә	A
ә	a
Ғ	Gh
ғ	gh
Қ	Q
қ	q
Ң	Ng
ң	ng
Ө	O
ө	o
Ұ	U
ұ	u
Ү	U
ү	u
Һ	H
һ	h
Ӣ	I
ӣ	i
Ӯ	U
ӯ	u
Ҳ	H
ҳ	h
Ҷ	J
ҷ	j
Җ	Zh
җ	zh
Ҙ	Dh
ҙ	dh
Ҫ	Th
ҫ	th
Ҡ	Q
ҡ	q
Ѣ	E
ѣ	e
Ѳ	F
ѳ	f
Ѵ	I
ѵ	i
"""

GREK = """
ΟΥ	OU
Ου	Ou
ου	ou
Ού	Ou
ού	ou
ΑΥ	AV
Αυ	Av
αυ	av
αύ	av
ΕΥ	EV
Ευ	Ev
ευ	ev
εύ	ev
ΗΥ	IV
Ηυ	Iv
ηυ	iv
ηύ	iv
ΓΓ	NG
Γγ	Ng
γγ	ng
ΓΚ	GK
Γκ	Gk
γκ	gk
ΓΧ	NCH
Γχ	Nch
γχ	nch
ΓΞ	NX
Γξ	Nx
γξ	nx
ΜΠ	B	initial
Μπ	B	initial
μπ	b	initial
ΜΠ	MP
Μπ	Mp
μπ	mp
Α	A
α	a
Β	V
β	v
Γ	G
γ	g
Δ	D
δ	d
Ε	E
ε	e
Ζ	Z
ζ	z
Η	I
η	i
Θ	Th
θ	th
Ι	I
ι	i
Κ	K
κ	k
Λ	L
λ	l
Μ	M
μ	m
Ν	N
ν	n
Ξ	X
ξ	x
Ο	O
ο	o
Π	P
π	p
Ρ	R
ρ	r
Σ	S
σ	s
ς	s
Τ	T
τ	t
Υ	Y
υ	y
Φ	F
φ	f
Χ	Ch
χ	ch
Ψ	Ps
ψ	ps
Ω	O
ω	o
Ά	A
ά	a
Έ	E
έ	e
Ή	I
ή	i
Ί	I
ί	i
Ό	O
ό	o
Ύ	Y
ύ	y
Ώ	O
ώ	o
Ϊ	I
ϊ	i
Ϋ	Y
ϋ	y
ΐ	i
ΰ	y
"""

ARAB = """
ﻻ	la
ﻼ	la
ﻷ	la
ﻸ	la
ﻹ	li
ﻺ	li
ﻵ	la
ﻶ	la
ا	a
ب	b
ت	t
ث	th
ج	j
ح	h
خ	kh
د	d
ذ	dh
ر	r
ز	z
س	s
ش	sh
ص	s
ض	d
ط	t
ظ	z
ع	'
غ	gh
ف	f
ق	q
ك	k
ل	l
م	m
ن	n
ه	h
و	w
ي	y
ء	'
آ	a
أ	a
ؤ	w
إ	i
ئ	'
ة	h	final
ة	t
ى	a
ٱ	a
پ	p
چ	ch
ژ	zh
گ	g
ک	k
ی	y
ہ	h
ھ	h
ٹ	t
ڈ	d
ڑ	r
ں	n
ے	e
ۃ	h
َ	a
ِ	i
ُ	u
٠	0
١	1
٢	2
٣	3
٤	4
٥	5
٦	6
٧	7
٨	8
٩	9
۰	0
۱	1
۲	2
۳	3
۴	4
۵	5
۶	6
۷	7
۸	8
۹	9
"""

HEBR = """
שׁ	sh
שׂ	s
וו	v
וי	oy
יי	ey
א	'
ב	v
ג	g
ד	d
ה	h
ו	v
ז	z
ח	kh
ט	t
י	y
כ	k
ך	kh
ל	l
מ	m
ם	m
נ	n
ן	n
ס	s
ע	'
פ	p
ף	f
צ	ts
ץ	ts
ק	k
ר	r
ש	sh
ת	t
ײ	ey
װ	v
ױ	oy
׳	'
ַ	a
ָ	a
ִ	i
ֵ	e
ֶ	e
ֹ	o
ֻ	u
"""

DEVA = """
अ	a
आ	aa
इ	i
ई	ii
उ	u
ऊ	uu
ऋ	ri
ए	e
ऐ	ai
ओ	o
औ	au
ऑ	o
ा	aa
ि	i
ी	ii
ु	u
ू	uu
ृ	ri
े	e
ै	ai
ो	o
ौ	au
ॉ	o
क	k
ख	kh
ग	g
घ	gh
ङ	ng
च	ch
छ	chh
ज	j
झ	jh
ञ	n
ट	t
ठ	th
ड	d
ढ	dh
ण	n
त	t
थ	th
द	d
ध	dh
न	n
प	p
फ	ph
ब	b
भ	bh
म	m
य	y
र	r
ल	l
व	v
श	sh
ष	sh
स	s
ह	h
ळ	l
क़	q
ख़	kh
ग़	gh
ज़	z
ड़	r
ढ़	rh
फ़	f
य़	y
्	<del>
़	<del>
ं	n
ः	h
ँ	n
०	0
१	1
२	2
३	3
४	4
५	5
६	6
७	7
८	8
९	9
"""

BENG = """
অ	a
আ	aa
ই	i
ঈ	ii
উ	u
ঊ	uu
ঋ	ri
এ	e
ঐ	oi
ও	o
ঔ	ou
া	aa
ি	i
ী	ii
ু	u
ূ	uu
ৃ	ri
ে	e
ৈ	oi
ো	o
ৌ	ou
ক	k
খ	kh
গ	g
ঘ	gh
ঙ	ng
চ	ch
ছ	chh
জ	j
ঝ	jh
ঞ	n
ট	t
ঠ	th
ড	d
ঢ	dh
ণ	n
ত	t
থ	th
দ	d
ধ	dh
ন	n
প	p
ফ	ph
ব	b
ভ	bh
ম	m
য	j
র	r
ল	l
শ	sh
ষ	sh
স	s
হ	h
ড়	r
ঢ়	rh
য়	y
ৎ	t
্	<del>
়	<del>
ং	ng
ঃ	h
ঁ	n
০	0
১	1
২	2
৩	3
৪	4
৫	5
৬	6
৭	7
৮	8
৯	9
"""

GEOR = """
ა	a
ბ	b
გ	g
დ	d
ე	e
ვ	v
ზ	z
თ	t
ი	i
კ	k'
ლ	l
მ	m
ნ	n
ო	o
პ	p'
ჟ	zh
რ	r
ს	s
ტ	t'
უ	u
ფ	p
ქ	k
ღ	gh
ყ	q'
შ	sh
ჩ	ch
ც	ts
ძ	dz
წ	ts'
ჭ	ch'
ხ	kh
ჯ	j
ჰ	h
"""

TABLES = {
    "Cyrl": CYRL,
    "Grek": GREK,
    "Arab": ARAB,
    "Hebr": HEBR,
    "Deva": DEVA,
    "Beng": BENG,
    "Geor": GEOR,
}


def main() -> None:
    out_dir = os.path.join(os.path.dirname(__file__), "..", "data", "tables")
    os.makedirs(out_dir, exist_ok=True)
    for script, body in TABLES.items():
        path = os.path.join(out_dir, script + ".tsv")
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(HEADER.format(script=script))
            f.write(body.lstrip("\n").replace("\t<del>", "\t"))
        print("wrote", path)


if __name__ == "__main__":
    main()
