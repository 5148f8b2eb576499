#!/usr/bin/env python3
# Scripted stand-in for an SMT solver: answers the version query, then
# misbehaves according to argv[1].
import sys
import time

mode = sys.argv[1] if len(sys.argv) > 1 else "hang"
if mode == "silent":
    time.sleep(60)
for line in sys.stdin:
    line = line.strip()
    if line == "(get-info :version)":
        print('(:version "0.0-fake")', flush=True)
    elif line == "(check-sat)":
        if mode == "hang":
            time.sleep(60)
        elif mode == "badvalue":
            print("sat", flush=True)
        elif mode == "garbage":
            print("maybe", flush=True)
    elif line.startswith("(get-value"):
        print("((X0 banana))", flush=True)
