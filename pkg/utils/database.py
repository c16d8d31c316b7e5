import sqlite3
import logging
from datetime import datetime
import json


# Initialize the report ledger
def init_db(db_path):
    logging.info("Initializing database.")
    try:
        conn = sqlite3.connect(db_path)
        cursor = conn.cursor()

        # One row per CLI report
        cursor.execute('''
            CREATE TABLE IF NOT EXISTS reports (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                command TEXT NOT NULL,
                digest TEXT,                  -- sha256 of the canonical instance text
                payload TEXT NOT NULL,        -- canonical JSON report
                exit_code INTEGER NOT NULL,
                timestamp TEXT NOT NULL
            );
        ''')

        # One row per failed check
        cursor.execute('''
            CREATE TABLE IF NOT EXISTS findings (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                command TEXT NOT NULL,
                digest TEXT,
                item TEXT NOT NULL,           -- failing theorem item or sweep check
                details TEXT,                 -- JSON serialized details
                timestamp TEXT NOT NULL
            );
        ''')

        conn.commit()
        logging.info("Database initialized.")
        return conn
    except sqlite3.Error as e:
        logging.error(f"Failed to initialize the database: {e}")
        raise


# Store a report
def store_report(conn, command, digest, payload, exit_code):
    if not conn:
        logging.error("Connection is None. Cannot store report.")
        return None

    logging.info(f"Storing {command} report for digest: {digest}")
    try:
        cursor = conn.cursor()
        cursor.execute('''
            INSERT INTO reports (command, digest, payload, exit_code, timestamp)
            VALUES (?, ?, ?, ?, ?)
        ''', (
            command,
            digest,
            json.dumps(payload, sort_keys=True),
            exit_code,
            datetime.now().strftime('%Y-%m-%d %H:%M:%S')
        ))
        conn.commit()
        return cursor.lastrowid
    except sqlite3.Error as e:
        conn.rollback()
        logging.error(f"Failed to store {command} report: {e}")
        raise


# Store a finding
def store_finding(conn, command, digest, item, details):
    if not conn:
        logging.error("Connection is None. Cannot store finding.")
        return None

    logging.info(f"Storing finding {item} from {command}.")
    try:
        cursor = conn.cursor()
        cursor.execute('''
            INSERT INTO findings (command, digest, item, details, timestamp)
            VALUES (?, ?, ?, ?, ?)
        ''', (
            command,
            digest,
            item,
            json.dumps(details, sort_keys=True, default=str),
            datetime.now().strftime('%Y-%m-%d %H:%M:%S')
        ))
        conn.commit()
        return cursor.lastrowid
    except sqlite3.Error as e:
        conn.rollback()
        logging.error(f"Failed to store finding {item}: {e}")
        raise


# Fetch findings, optionally restricted to one command
def fetch_findings(conn, command=None):
    if not conn:
        logging.error("Connection is None. Cannot fetch findings.")
        return []

    try:
        cursor = conn.cursor()
        if command:
            cursor.execute("SELECT command, digest, item, details FROM findings WHERE command = ? ORDER BY id", (command,))
        else:
            cursor.execute("SELECT command, digest, item, details FROM findings ORDER BY id")
        rows = cursor.fetchall()
        return [
            {'command': row[0], 'digest': row[1], 'item': row[2], 'details': json.loads(row[3]) if row[3] else {}}
            for row in rows
        ]
    except sqlite3.Error as e:
        logging.error(f"Failed to fetch findings: {e}")
        raise
