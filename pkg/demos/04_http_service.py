"""Drive the HTTP API through a whole interactive session.

Builds the demo index in-process, serves it with uvicorn on a local port,
then plays both sides of the conversation: create a session, confirm
concepts, judge results, refine twice.

Run from the repository root:  python demos/04_http_service.py
"""

import threading
import time
from pathlib import Path

import httpx
import uvicorn

from cbvr import build_weight_matrix, ingest_corpus
from cbvr.service.app import create_app
from cbvr.service.config import ServiceConfig

CORPUS = Path(__file__).parent / "corpus"
PORT = 8765

index, lexicon, _ = ingest_corpus(
    (CORPUS / "concepts.xml").read_bytes(),
    (CORPUS / "contexts.xml").read_bytes(),
    (CORPUS / "lexicon.tsv").read_bytes(),
)
app = create_app(index, build_weight_matrix(index), lexicon, config=ServiceConfig())

server = uvicorn.Server(
    uvicorn.Config(app, host="127.0.0.1", port=PORT, log_level="warning")
)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)

base = f"http://127.0.0.1:{PORT}"
with httpx.Client(base_url=base, timeout=10.0) as client:
    print(f"service up at {base}")
    print("known contexts:", [c["name"] for c in client.get("/contexts").json()])

    body = client.post("/sessions", json={"text": "news"}).json()
    sid = body["session_id"]
    print(f"\nsession {sid[:8]}… candidates:")
    for c in body["candidates"]:
        print(f"  {c['concept_id']}: {c['name']} (score {c['score']})")

    chosen = [c["concept_id"] for c in body["candidates"][:2]]
    results = client.post(f"/sessions/{sid}/confirm", json={"concept_ids": chosen}).json()
    print(f"\nQ{results['iteration']} results:")
    for r in results["results"][:5]:
        print(f"  #{r['rank']} {r['video_id']}  {r['similarity']:.4f}")

    for step in (1, 2):
        top = results["results"]
        judgments = [
            {"video_id": r["video_id"],
             "label": "relevant" if r["video_id"].startswith("shot10") else "irrelevant"}
            for r in top[:5]
        ]
        results = client.post(f"/sessions/{sid}/feedback", json={"judgments": judgments}).json()
        print(f"\nQ{results['iteration']} results after refining:")
        for r in results["results"][:5]:
            judged = f" [{r['judged']}]" if "judged" in r else ""
            print(f"  #{r['rank']} {r['video_id']}  {r['similarity']:.4f}{judged}")

    state = client.get(f"/sessions/{sid}").json()
    print(f"\nsession phase={state['phase']} iteration={state['iteration']}")
    print("history lengths per iteration:",
          {h["iteration"]: len(h["video_ids"]) for h in state["history"]})

server.should_exit = True
thread.join(timeout=5)
print("\nserver stopped")
