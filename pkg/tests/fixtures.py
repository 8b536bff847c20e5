"""Shared fixture sources: the clipboard example pair and the 20-function
corpus used for self-recovery, ablation ordering and sweeps.

FIG2 is FIG1 with its six locals renamed (event->e, dataTransfer->r,
legacyText->i, i->p, contentType->f, data->n) and nothing else changed, so
a perfect recovery of FIG2 reproduces FIG1 byte for byte. The corpus is
built from disjoint pivot vocabularies per cluster:

* clipboard cluster: feeds the FIG2 walkthrough (dataTransfer/data/...)
* config cluster:    SVC ties that only the task context resolves
* summary cluster:   an identical-graph decoy (item vs user) that only
                     co-occurrence resolves inside an anonymous function
* singles:           distinctive graphs that self-recover through SVC alone
"""

FIG1 = """util.getClipboardContent = function (event) {
    var dataTransfer = event.clipboardData || window.clipboardData || event.dataTransfer;
    if (!dataTransfer) {
        return {};
    }
    var legacyText, i, contentType, data = {};
    if (dataTransfer.getData) {
        legacyText = dataTransfer.getData('Text');
        if (legacyText && legacyText.length) {
            data['text/plain'] = legacyText;
        }
    }
    if (dataTransfer.types) {
        for (i = 0; i < dataTransfer.types.length; i++) {
            contentType = dataTransfer.types[i];
            data[contentType] = dataTransfer.getData(contentType);
        }
    }
    return data;
};
"""

FIG2 = """util.getClipboardContent = function (e) {
    var r = e.clipboardData || window.clipboardData || e.dataTransfer;
    if (!r) {
        return {};
    }
    var i, p, f, n = {};
    if (r.getData) {
        i = r.getData('Text');
        if (i && i.length) {
            n['text/plain'] = i;
        }
    }
    if (r.types) {
        for (p = 0; p < r.types.length; p++) {
            f = r.types[p];
            n[f] = r.getData(f);
        }
    }
    return n;
};
"""

FIG_RENAMES = {
    "event": "e",
    "dataTransfer": "r",
    "legacyText": "i",
    "i": "p",
    "contentType": "f",
    "data": "n",
}

# One entry per corpus file (20 functions overall, fig1 included).
CORPUS = {
    "clipboard/util.js": FIG1,
    "clipboard/copy.js": """\
function copyTransferData(event) {
    var dataTransfer = event.clipboardData || event.dataTransfer;
    var data = {};
    var legacyText = dataTransfer.getData('Text');
    if (legacyText && legacyText.length) {
        data['text/plain'] = legacyText;
    }
    return data;
}
""",
    "clipboard/read.js": """\
function readTransferTypes(event) {
    var dataTransfer = event.clipboardData || event.dataTransfer;
    var data = {};
    var i, contentType;
    for (i = 0; i < dataTransfer.types.length; i++) {
        contentType = dataTransfer.types[i];
        data[contentType] = dataTransfer.getData(contentType);
    }
    return data;
}
""",
    "config/load_a.js": """\
function loadConfig(source) {
    var config = parser.parse(source);
    if (config.options) {
        apply(config);
    }
    return config.merge(source.trim());
}
""",
    "config/load_b.js": """\
function loadConfig(path) {
    var config = parser.parse(path);
    if (config.options) {
        apply(config);
    }
    return config;
}
""",
    "config/cache.js": """\
function rebuildCache(seed) {
    var cache = parser.parse(seed);
    if (cache.options) {
        apply(cache);
    }
    return cache;
}
""",
    "config/flush.js": """\
function flushCache(cache) {
    cache.clear();
}
""",
    "summary/render_a.js": """\
function renderSummary(user, total) {
    label.show(user.getName());
    label.show(user.getId());
    meter.show(total);
}
""",
    "summary/render_b.js": """\
function renderSummary(user, total) {
    panel.draw(user.getName());
    panel.draw(user.getId());
    meter.show(total);
}
""",
    "summary/widget.js": """\
register(function (user, total) {
    dial.show(user.getName());
    dial.show(user.getId());
    gauge.show(total);
    return user;
});
""",
    "summary/items.js": """\
function listItems(item) {
    row.show(item.getName());
    row.show(item.getId());
}
""",
    "net/request.js": """\
function sendRequest(url, payload) {
    var request = new XMLHttpRequest();
    request.open('POST', url);
    request.send(payload);
    return request;
}
""",
    "net/response.js": """\
function parseResponse(request) {
    var body = request.responseText;
    var parsed = JSON.parse(body);
    return parsed;
}
""",
    "dom/toggle.js": """\
function toggleVisibility(element) {
    var style = element.style;
    style.display = style.display === 'none' ? '' : 'none';
    return element;
}
""",
    "dom/create.js": """\
function createButton(label) {
    var button = document.createElement('button');
    button.textContent = label;
    return button;
}
""",
    "data/save.js": """\
function saveData(data) {
    storage.write(data);
    return data.length;
}
""",
    "data/merge.js": """\
function mergeData(data, extra) {
    return data.concat(extra);
}
""",
    "math/average.js": """\
function computeAverage(values) {
    var sum = totals.reduce(values);
    return sum / values.length;
}
""",
    "queue/push.js": """\
function enqueueTask(task) {
    var queue = scheduler.getQueue();
    queue.push(task);
    return queue.length;
}
""",
    "queue/pop.js": """\
function dequeueTask() {
    var queue = scheduler.getQueue();
    var task = queue.shift();
    return task;
}
""",
}


def write_corpus(root, files=CORPUS):
    """Materialize the corpus under `root` (a pathlib.Path)."""
    for rel, text in files.items():
        target = root / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text)
    return root
