#!/usr/bin/env python3
"""Regenerates the bundled fixtures under fixtures/. Output is deterministic."""

import datetime
import json
import pathlib
import random

BASE_TIME = datetime.datetime(2024, 5, 1, 12, 0, 0, tzinfo=datetime.timezone.utc)
ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

V_RECORDS = [
    ("v01", "Benzerlik Bulma",
     "Aşağıdaki listede çorap, hangilerine uymamaktadır? Bisiklet, Gömlek, Tren, Kitap, Uçak.",
     "Çorap bir giysidir, bu yüzden listedeki gömlek ile uyumludur; bisiklet, tren, kitap ve uçak çoraba uymamaktadır."),
    ("v02", "Benzerlik Bulma",
     "Elma, armut ve havuç arasında hangisi diğerlerinden farklıdır?",
     "Havuç bir sebzedir, elma ve armut ise meyvedir; bu yüzden havuç farklıdır."),
    ("v03", "Benzerlik Bulma",
     "Kedi ile aslan arasındaki benzerlik nedir?",
     "Kedi ve aslan aynı aileden gelen etçil memelilerdir ve ikisi de avcıdır."),
    ("v04", "Basit Matematik",
     "100 gramı 5 TL olan fındığın kilosu kaç TL'dir?",
     "Bir kilo 1000 gramdır, 1000 gram için 10 kat ödenir ve fındığın kilosu 50 TL'dir."),
    ("v05", "Basit Matematik",
     "Bir sınıfta 12 kız ve 18 erkek öğrenci var. Toplam kaç öğrenci vardır?",
     "Sınıfta 12 kız ve 18 erkek öğrenci olduğuna göre toplam 30 öğrenci vardır."),
    ("v06", "Basit Matematik",
     "Saatte 60 kilometre giden bir araç 3 saatte kaç kilometre yol alır?",
     "Araç saatte 60 kilometre gittiğine göre 3 saatte 180 kilometre yol alır."),
    ("v07", "Basit Matematik",
     "Bir düzine yumurtanın yarısı kaç yumurtadır?",
     "Bir düzine 12 yumurtadır ve yarısı 6 yumurta eder."),
    ("v08", "Hikaye Oluşturma",
     "Engelli bir genç profesyonel bir atlet olmak ister. Çektiği zorlukları anlat.",
     "Genç atlet her sabah erkenden antrenmana çıktı, erişilemeyen tesislerle ve önyargılarla mücadele etti ama pes etmedi ve sonunda ulusal yarışmada madalya kazandı."),
    ("v09", "Hikaye Oluşturma",
     "Kaybolan bir köpeğin eve dönüş yolculuğunu anlat.",
     "Küçük köpek fırtınada yolunu kaybetti, günlerce şehirde dolaştı, iyi kalpli bir çocuğun yardımıyla sonunda ailesine kavuştu."),
    ("v10", "Hikaye Oluşturma",
     "İstanbul'da geçen kısa bir macera hikayesi yaz.",
     "İki arkadaş İstanbul'un eski sokaklarında kaybolmuş bir haritanın izini sürdü ve Galata Kulesi'nin yakınında saklı bir hazine buldu."),
]

G_RECORDS = [
    ("g01", "Türkiye’nin başkenti neresidir?", "Türkiye’nin başkenti Ankara’dır."),
    ("g02", "Aristotales ve Platon arasındaki ilişki nedir?", "Aristotales Platon’un öğrencisidir."),
    ("g03", "Yapay zeka işsizlik riski yaratıyor mu?",
     "Evet, yapay zeka teknolojileri tekrar eden işleri yapan çalışanları işsiz bırakabilir."),
    ("g04", "Suyun kaynama noktası kaç derecedir?", "Su deniz seviyesinde 100 derecede kaynar."),
    ("g05", "Dünyanın en uzun nehri hangisidir?", "Dünyanın en uzun nehri Nil nehridir."),
    ("g06", "Fotosentez nedir?",
     "Fotosentez bitkilerin güneş ışığını kullanarak karbondioksit ve sudan besin üretmesidir."),
    ("g07", "İstanbul hangi iki kıta üzerinde yer alır?", "İstanbul Avrupa ve Asya kıtaları üzerinde yer alır."),
    ("g08", "Bir yılda kaç ay vardır?", "Bir yılda on iki ay vardır."),
    ("g09", "Güneş sistemindeki en büyük gezegen hangisidir?",
     "Güneş sistemindeki en büyük gezegen Jüpiter'dir."),
    ("g10", "Kitap okumanın faydaları nelerdir?",
     "Kitap okumak kelime dağarcığını geliştirir, hayal gücünü besler ve odaklanmayı artırır."),
]

FILLER = ["bence", "aslında", "genel olarak", "belki", "kısaca", "şöyle ki", "yani", "tabii"]

# (model, fraction of reference words kept, missing record ids, BT strength)
MODELS = [
    ("alpha-large", 0.95, set(), 3.0),
    ("beta-medium", 0.65, set(), 1.0),
    ("gamma-small", 0.35, {"v07", "g08"}, 0.5),
]


def degrade(rng, text, keep):
    words = text.split()
    out = [w for w in words if rng.random() < keep]
    if not out:
        out = words[:1]
    for _ in range(int(round((1.0 - keep) * len(words)))):
        out.insert(rng.randrange(len(out) + 1), rng.choice(FILLER))
    return " ".join(out)


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


def timestamp(seconds):
    t = BASE_TIME + datetime.timedelta(seconds=seconds)
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def main():
    rng = random.Random(20240501)
    write_jsonl(ROOT / "V.jsonl", [
        {"id": i, "category": c, "instruction": q, "reference_answer": a}
        for i, c, q, a in V_RECORDS])
    write_jsonl(ROOT / "G.jsonl", [
        {"id": i, "category": "", "instruction": q, "reference_answer": a}
        for i, q, a in G_RECORDS])

    for name, keep, missing, _ in MODELS:
        for ds, records in (("V", [(r[0], r[3]) for r in V_RECORDS]),
                            ("G", [(r[0], r[2]) for r in G_RECORDS])):
            rows = [{"model_name": name, "dataset_name": ds}]
            rows += [{"id": i, "response": degrade(rng, ref, keep)}
                     for i, ref in records if i not in missing]
            write_jsonl(ROOT / "responses" / ds / f"{name}.jsonl", rows)

    judges = [f"judge-{k}" for k in range(1, 9)]
    strength = {m[0]: m[3] for m in MODELS}
    answered = {m[0]: {r[0] for r in V_RECORDS} - m[2] for m in MODELS}
    votes = []
    for n in range(300):
        a, b = rng.sample([m[0] for m in MODELS], 2)
        common = sorted(answered[a] & answered[b])
        record = rng.choice(common)
        u = rng.random()
        if u < 0.08:
            outcome = "BOTH_GOOD"
        elif u < 0.12:
            outcome = "NEITHER"
        else:
            p = strength[a] / (strength[a] + strength[b])
            outcome = "A_WINS" if rng.random() < p else "B_WINS"
        votes.append({"vote_id": f"vote-{n + 1:04d}", "record_id": record,
                      "model_a": a, "model_b": b, "outcome": outcome,
                      "judge_id": judges[n % len(judges)],
                      "timestamp": timestamp(37 * n)})
    write_jsonl(ROOT / "votes.log", votes)

    write_jsonl(ROOT / "one_vote.log", [{
        "vote_id": "vote-0001", "record_id": "v04", "model_a": "alpha-large",
        "model_b": "beta-medium", "outcome": "A_WINS", "judge_id": "judge-1",
        "timestamp": "2024-05-01T12:00:00Z"}])

    write_jsonl(ROOT / "pairs.jsonl", [
        {"id": "p1", "instruction": "Türkiye’nin başkenti neresidir?",
         "response": "Başkent İstanbul'dur.", "source": "M", "quality_score": 0.3},
        {"id": "p2", "instruction": "Bir yılda kaç ay vardır?",
         "response": "Bir yılda on iki ay vardır.", "source": "M", "quality_score": 0.7},
    ])


if __name__ == "__main__":
    main()
