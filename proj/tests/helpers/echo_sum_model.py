#!/usr/bin/env python3
"""Line-protocol scoring stub: each input scores the sum of its values."""
import json
import sys


def main() -> None:
    hello = json.loads(sys.stdin.readline())
    print(json.dumps({"ready": hello["hello"]}), flush=True)
    for line in sys.stdin:
        request = json.loads(line)
        outputs = [
            sum(value for feature in example for value in feature)
            for example in request["inputs"]
        ]
        print(json.dumps({"id": request["id"], "outputs": outputs}), flush=True)


if __name__ == "__main__":
    main()
